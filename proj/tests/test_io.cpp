#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>

#include "ncmart/io.hpp"
#include "support.hpp"

using namespace ncmart;
using namespace ncmart::testing;

namespace {
Errc code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return Errc::bad_params;
}
}  // namespace

TEST(Io, MatrixRoundTrip) {
  std::mt19937_64 g(1);
  Matrix a = gaussian(5, g);
  Json j = matrix_to_json(a);
  EXPECT_EQ(j["dim"], 5);
  EXPECT_EQ(max_abs(matrix_from_json(Json::parse(j.dump())) - a), 0.0);
}

TEST(Io, FiltrationRoundTrip) {
  for (const auto& f : small_filtrations()) {
    FiltrationPtr g = filtration_from_json(Json::parse(filtration_to_json(*f).dump()));
    EXPECT_EQ(g->kind(), f->kind());
    EXPECT_EQ(g->dim(), f->dim());
    EXPECT_EQ(g->levels(), f->levels());
    std::mt19937_64 r(3);
    Matrix a = gaussian(f->dim(), r);
    for (int n = 1; n <= f->levels(); ++n) EXPECT_LE(max_abs(g->condexp(n, a) - f->condexp(n, a)), 1e-14);
  }
}

TEST(Io, MartingaleRoundTrip) {
  Martingale x = random_martingale(Filtration::dyadic(3, 3), 9);
  Martingale y = martingale_from_json(Json::parse(martingale_to_json(x).dump()));
  for (int n = 1; n <= 3; ++n) EXPECT_LE(max_abs(y.at(n) - x.at(n)), 1e-15);
}

TEST(Io, DataFileLoads) {
  Martingale x = martingale_from_json(read_json_file(std::string(NCMART_TEST_DATA_DIR) + "/dx4.json"));
  EXPECT_LE(max_abs(x.final() - dx4().final()), 0.0);
  EXPECT_LE(max_abs(x.at(1) - dx4().at(1)), 1e-15);
}

TEST(Io, BadShapes) {
  EXPECT_EQ(code_of([] { matrix_from_json(Json::parse(R"({"dim":2,"rows":[[1,2]]})")); }), Errc::io_error);
  EXPECT_EQ(code_of([] { matrix_from_json(Json::parse(R"({"dim":2,"rows":[[1,2],[3]]})")); }), Errc::io_error);
  EXPECT_EQ(code_of([] { matrix_from_json(Json::parse(R"({"rows":"x"})")); }), Errc::io_error);
  EXPECT_EQ(code_of([] {
              filtration_from_json(Json::parse(R"({"kind":"dyadic","dim":5,"levels":2,"params":{"L":2}})"));
            }),
            Errc::io_error);
  EXPECT_EQ(code_of([] {
              Json j = martingale_to_json(dx4());
              j["final"] = matrix_to_json(Matrix::Identity(3, 3));
              martingale_from_json(j);
            }),
            Errc::io_error);
  EXPECT_EQ(code_of([] { read_json_file("/nonexistent/dir/file.json"); }), Errc::io_error);
}

TEST(Io, DecompositionJson) {
  Martingale x = dx4();
  Json j = decomposition_to_json(x, triple(x, x));
  EXPECT_FALSE(j.dump().empty());
  std::string path = (std::filesystem::temp_directory_path() / "ncmart_io_test.json").string();
  write_text_file(path, j.dump());
  EXPECT_EQ(read_json_file(path), j);
  std::remove(path.c_str());
}
