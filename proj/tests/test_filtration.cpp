#include <gtest/gtest.h>

#include <cmath>

#include "ncmart/filtration.hpp"
#include "ncmart/hardy.hpp"
#include "support.hpp"

using namespace ncmart;
using namespace ncmart::testing;

namespace {

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Matrix x_times(const Matrix& a, const Matrix& b) { return a * b; }

Matrix pauli_z() { return diag({1, -1}); }
Matrix pauli_x() {
  Matrix s(2, 2);
  s << 0, 1, 1, 0;
  return s;
}

}  // namespace

TEST(Filtration, DyadicBlockAverages) {
  auto f = Filtration::dyadic(2, 2);
  EXPECT_LE(max_abs(f->condexp(1, diag({1, 3, 2, 6})) - diag({2, 2, 4, 4})), 1e-14);
  EXPECT_LE(max_abs(f->condexp(0, diag({1, 3, 2, 6})) - diag({2, 2, 4, 4})), 1e-14);
  EXPECT_LE(max_abs(f->condexp(2, diag({1, 3, 2, 6})) - diag({1, 3, 2, 6})), 1e-14);
}

TEST(Filtration, TensorPartialTrace) {
  auto f = Filtration::tensor(2);
  EXPECT_LE(max_abs(f->condexp(1, kron(pauli_z(), pauli_z()))), 1e-14);
  // E_1(A (x) B) = (tr B / 2) A (x) 1, and on A = B = sigma_x this vanishes.
  EXPECT_LE(max_abs(f->condexp(1, kron(pauli_x(), pauli_x()))), 1e-14);
  Matrix b = diag({3, 1});
  EXPECT_LE(max_abs(f->condexp(1, kron(pauli_x(), b)) - 2.0 * kron(pauli_x(), identity(2))), 1e-14);
}

TEST(Filtration, PinchingZeroesOffDiagonalBlocks) {
  auto f = Filtration::pinching({{2, 2}, {4}});
  std::mt19937_64 g(1);
  Matrix a = gaussian(4, g);
  Matrix e = f->condexp(1, a);
  EXPECT_LE(max_abs(e.block(0, 2, 2, 2)), 1e-15);
  EXPECT_LE(max_abs(e.block(2, 0, 2, 2)), 1e-15);
  EXPECT_LE(max_abs(e.block(0, 0, 2, 2) - a.block(0, 0, 2, 2)), 1e-15);
}

TEST(Filtration, InvalidParameters) {
  EXPECT_THROW(Filtration::tensor(0), Error);
  EXPECT_THROW(Filtration::dyadic(2, 3), Error);
  EXPECT_THROW(Filtration::pinching({{2, 2}, {1, 3}}), Error);
  EXPECT_THROW(Filtration::pinching({{2, 2}, {2, 2}}), Error);
}

TEST(Filtration, ConditionalExpectationIsProjection) {
  std::mt19937_64 g(2);
  for (const auto& f : small_filtrations()) {
    Matrix a = gaussian(f->dim(), g), b = gaussian(f->dim(), g);
    for (int n = 1; n <= f->levels(); ++n) {
      Matrix e = f->condexp(n, a);
      EXPECT_LE(max_abs(f->condexp(n, e) - e), 1e-12);
      EXPECT_NEAR(normalized_trace(e), normalized_trace(a), 1e-12);
      // Bimodule property: E(e b) = e E(b) for e in M_n.
      EXPECT_LE(max_abs(f->condexp(n, e * b) - e * f->condexp(n, b)), 1e-10);
      if (n > 1) EXPECT_LE(max_abs(f->condexp(n - 1, e) - f->condexp(n - 1, a)), 1e-12);
    }
  }
}

TEST(Martingale, FromFinalExamples) {
  Martingale x = dx4();
  EXPECT_LE(max_abs(x.at(1) - diag({1, 1, 0.5, 0.5})), 1e-15);
  EXPECT_LE(max_abs(x.at(0)), 0.0);
  auto f = Filtration::tensor(3);
  Martingale one = Martingale::from_final(f, identity(8));
  for (int n = 1; n <= 3; ++n) EXPECT_LE(max_abs(one.at(n) - identity(8)), 1e-14);
  Martingale z = Martingale::from_final(f, Matrix::Zero(8, 8));
  for (int n = 1; n <= 3; ++n) EXPECT_LE(max_abs(z.diff(n)), 0.0);
}

TEST(Martingale, RejectsNonMartingale) {
  auto f = Filtration::dyadic(2, 2);
  EXPECT_THROW(Martingale(f, {diag({1, 0, 0, 0}), diag({1, 0, 0, 0})}), Error);
}

TEST(RandomMartingale, Deterministic) {
  auto f = Filtration::tensor(3);
  Martingale a = random_martingale(f, 11, Law::gaussian);
  Martingale b = random_martingale(f, 11, Law::gaussian);
  EXPECT_TRUE((a.final().array() == b.final().array()).all());
  Martingale c = random_martingale(f, 12, Law::gaussian);
  EXPECT_GT(max_abs(a.final() - c.final()), 0.0);
}

TEST(RandomMartingale, Normalizations) {
  for (const auto& f : small_filtrations()) {
    EXPECT_NEAR(lp_norm(random_martingale(f, 3, Law::uniform, Normalize::l1).final(), 1), 1, 1e-12);
    EXPECT_NEAR(op_norm(random_martingale(f, 3, Law::gaussian, Normalize::linf).final()), 1, 1e-12);
  }
  Martingale x = random_martingale(Filtration::tensor(3), 7, Law::gaussian);
  EXPECT_LE(x.martingale_residual(), 1e-10);
  EXPECT_TRUE(x.self_adjoint());
}

TEST(Martingale, OrthogonalDifferencesAndPythagoras) {
  for (const auto& f : small_filtrations())
    for (std::uint64_t s = 0; s < 20; ++s) {
      Martingale x = random_martingale(f, s, s % 2 ? Law::uniform : Law::gaussian);
      double sum = 0.0;
      for (int n = 1; n <= x.levels(); ++n) {
        sum += lp_norm(x.diff(n), 2) * lp_norm(x.diff(n), 2);
        for (int m = n + 1; m <= x.levels(); ++m)
          EXPECT_LE(std::abs(normalized_trace(x.diff(n).transpose() * x.diff(m))), 1e-10);
      }
      const double total = std::pow(lp_norm(x.final(), 2), 2);
      EXPECT_NEAR(sum, total, 1e-9 * total);
    }
}

TEST(TransformPair, Examples) {
  Martingale x = dx4();
  MartingalePair same = transform_pair(x, std::vector<double>{1, 1});
  EXPECT_LE(max_abs(same.y.final() - x.final()), 1e-15);
  MartingalePair zero = transform_pair(x, std::vector<double>{0, 0});
  EXPECT_LE(max_abs(zero.y.final()), 0.0);
  MartingalePair flip = transform_pair(x, std::vector<double>{1, -1});
  EXPECT_LE(max_abs(flip.y.diff(2) + diag({2, -2, 0, 0})), 1e-15);
  EXPECT_LE(max_abs(flip.y.final() - diag({-1, 3, 0.5, 0.5})), 1e-15);
}

TEST(TransformPair, RejectsLargeSymbols) {
  try {
    transform_pair(dx4(), std::vector<double>{1, 1.5});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::symbol_too_large);
  }
}

TEST(TransformPair, ElementSymbolValidation) {
  auto t = Filtration::tensor(2);
  Martingale x = random_martingale(t, 1, Law::gaussian);
  try {
    transform_pair(x, std::vector<Matrix>{kron(pauli_z(), identity(2)), identity(4)});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::symbol_not_commuting);
  }
  Martingale d = dx4();
  try {
    transform_pair(d, std::vector<Matrix>{identity(4), diag({1, -1, 1, -1})});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::symbol_not_adapted);
  }
  MartingalePair ok = transform_pair(d, std::vector<Matrix>{identity(4), diag({1, 1, -0.5, -0.5})});
  EXPECT_LE(max_abs(ok.y.diff(2) - x_times(diag({1, 1, -0.5, -0.5}), d.diff(2))), 1e-15);
}

TEST(Subordination, Examples) {
  for (const auto& f : small_filtrations()) {
    Martingale x = random_martingale(f, 5, Law::gaussian);
    std::vector<double> eps;
    for (int n = 1; n <= x.levels(); ++n) eps.push_back(n % 2 ? 0.7 : -1.0);
    MartingalePair pr = transform_pair(x, eps);
    auto c = check_subordination(pr.x, pr.y, SubordinationMode::weak_sampled, 50, 3);
    EXPECT_TRUE(c.holds);
    EXPECT_GE(c.worst_margin, -1e-9);
    for (auto mode : {SubordinationMode::very_weak, SubordinationMode::weak_sampled, SubordinationMode::ds_sampled}) {
      auto same = check_subordination(x, x, mode, 10, 1);
      EXPECT_TRUE(same.holds);
      EXPECT_GE(same.worst_margin, -1e-12);
    }
    auto twice = check_subordination(x, x.scaled(2), SubordinationMode::very_weak, 10, 1);
    EXPECT_FALSE(twice.holds);
    EXPECT_LT(twice.worst_margin, 0);
  }
}

TEST(Subordination, EveryStructuredProjectionForScalarSymbols) {
  auto f = Filtration::dyadic(4, 4);
  std::mt19937_64 g(9);
  for (std::uint64_t s = 0; s < 10; ++s) {
    Martingale x = random_martingale(f, s, Law::uniform);
    MartingalePair pr = transform_pair(x, std::vector<double>{-1, 0.3, 1, -0.6});
    CandidateSets cs(4);
    for (int n = 1; n <= 4; ++n)
      for (const auto& b : f->spanning_set(std::max(n - 1, 1))) cs[n - 1].push_back(b);
    auto c = check_subordination(pr.x, pr.y, SubordinationMode::weak_sampled, 30, s, cs);
    EXPECT_TRUE(c.holds);
    EXPECT_GE(c.worst_margin, -1e-9);
  }
}

TEST(ClassicalSanity, DyadicSquareFunctionOrder) {
  auto f = Filtration::dyadic(4, 4);
  std::mt19937_64 g(10);
  std::uniform_real_distribution<double> u(-1, 1);
  for (std::uint64_t s = 0; s < 30; ++s) {
    Martingale x = random_martingale(f, s, Law::gaussian);
    std::vector<Matrix> syms;
    for (int n = 1; n <= 4; ++n) {
      Matrix xi = Matrix::Zero(16, 16);
      for (const auto& b : f->relative_commutant(n)) xi += u(g) * b;
      syms.push_back(xi);
    }
    MartingalePair pr = transform_pair(x, syms);
    Matrix sx = square_fn(pr.x, Side::column), sy = square_fn(pr.y, Side::column);
    EXPECT_GE(min_eigenvalue(sx - sy), -1e-9);
    for (double p : {0.5, 1.0, 1.5, 2.0})
      EXPECT_LE(hardy_norm(pr.y, HardyNorm::Hpc, p), hardy_norm(pr.x, HardyNorm::Hpc, p) * (1 + 1e-9));
  }
}
