#include "ncmart/io.hpp"

#include <fstream>
#include <sstream>

namespace ncmart {

namespace {

double max_abs(const Matrix& a) { return a.size() ? a.cwiseAbs().maxCoeff() : 0.0; }

Json levels_json(const Martingale& x) {
  Json out = Json::array();
  for (int n = 1; n <= x.levels(); ++n) out.push_back(matrix_to_json(x.diff(n)));
  return out;
}

Json terms_json(const std::vector<Matrix>& terms) {
  Json out = Json::array();
  for (const auto& t : terms) out.push_back(matrix_to_json(t));
  return out;
}

/// max_n |sum of piece differences - dy_n|
double residual(const Martingale& y, const std::vector<const std::vector<Matrix>*>& pieces) {
  double r = 0.0;
  for (int n = 1; n <= y.levels(); ++n) {
    Matrix s = -y.diff(n);
    for (const auto* p : pieces) s += (*p)[n - 1];
    r = std::max(r, max_abs(s));
  }
  return r;
}

std::vector<Matrix> diffs(const Martingale& x) {
  std::vector<Matrix> out;
  for (int n = 1; n <= x.levels(); ++n) out.push_back(x.diff(n));
  return out;
}

}  // namespace

Json matrix_to_json(const Matrix& a) {
  if (a.rows() != a.cols()) throw Error(Errc::bad_params, "only square matrices are serialized");
  Json rows = Json::array();
  for (int i = 0; i < a.rows(); ++i) {
    Json row = Json::array();
    for (int j = 0; j < a.cols(); ++j) row.push_back(a(i, j));
    rows.push_back(std::move(row));
  }
  return {{"dim", a.rows()}, {"rows", std::move(rows)}};
}

Matrix matrix_from_json(const Json& j) {
  try {
    const int d = j.at("dim").get<int>();
    const Json& rows = j.at("rows");
    if (d < 1 || static_cast<int>(rows.size()) != d)
      throw Error(Errc::io_error, "matrix JSON: row count does not match dim");
    Matrix a(d, d);
    for (int i = 0; i < d; ++i) {
      if (static_cast<int>(rows[i].size()) != d)
        throw Error(Errc::io_error, "matrix JSON: ragged row " + std::to_string(i));
      for (int k = 0; k < d; ++k) a(i, k) = rows[i][k].get<double>();
    }
    return a;
  } catch (const Json::exception& e) {
    throw Error(Errc::io_error, std::string("matrix JSON: ") + e.what());
  }
}

Json filtration_to_json(const Filtration& f) {
  Json params = Json::object();
  switch (f.kind()) {
    case FiltrationKind::dyadic: params["L"] = f.dyadic_depth(); break;
    case FiltrationKind::tensor: break;
    case FiltrationKind::pinching: params["blocks"] = f.blocks(); break;
    case FiltrationKind::generic: {
      Json spans = Json::array();
      for (int n = 1; n <= f.levels(); ++n) spans.push_back(terms_json(f.spanning_set(n)));
      params["spanning"] = std::move(spans);
      break;
    }
  }
  return {{"kind", kind_name(f.kind())}, {"dim", f.dim()}, {"levels", f.levels()}, {"params", params}};
}

FiltrationPtr filtration_from_json(const Json& j) {
  try {
    const FiltrationKind kind = parse_kind(j.at("kind").get<std::string>());
    const int levels = j.at("levels").get<int>();
    const Json params = j.value("params", Json::object());
    FiltrationPtr f;
    switch (kind) {
      case FiltrationKind::dyadic: f = Filtration::dyadic(params.value("L", levels), levels); break;
      case FiltrationKind::tensor: f = Filtration::tensor(levels); break;
      case FiltrationKind::pinching:
        f = Filtration::pinching(params.at("blocks").get<std::vector<std::vector<int>>>());
        break;
      case FiltrationKind::generic: {
        std::vector<std::vector<Matrix>> spans;
        for (const auto& level : params.at("spanning")) {
          spans.emplace_back();
          for (const auto& m : level) spans.back().push_back(matrix_from_json(m));
        }
        f = Filtration::generic(j.at("dim").get<int>(), spans);
        break;
      }
    }
    if (j.contains("dim") && j.at("dim").get<int>() != f->dim())
      throw Error(Errc::io_error, "filtration JSON: dim does not match the parameters");
    if (f->levels() != levels) throw Error(Errc::io_error, "filtration JSON: level count mismatch");
    return f;
  } catch (const Json::exception& e) {
    throw Error(Errc::io_error, std::string("filtration JSON: ") + e.what());
  }
}

Json martingale_to_json(const Martingale& x) {
  return {{"filtration", filtration_to_json(x.filtration())}, {"final", matrix_to_json(x.final())}};
}

Martingale martingale_from_json(const Json& j) {
  try {
    FiltrationPtr f = filtration_from_json(j.at("filtration"));
    Matrix xN = matrix_from_json(j.at("final"));
    if (xN.rows() != f->dim()) throw Error(Errc::io_error, "martingale JSON: final has the wrong size");
    return Martingale::from_final(f, xN);
  } catch (const Json::exception& e) {
    throw Error(Errc::io_error, std::string("martingale JSON: ") + e.what());
  }
}

Json adapted_to_json(const AdaptedSequence& s) { return terms_json(s.terms); }

Json decomposition_to_json(const Martingale& y, const GundyDecomposition& g) {
  const auto a = diffs(g.alpha), b = diffs(g.beta), c = diffs(g.gamma), u = diffs(g.upsilon);
  return {{"method", "gundy"},
          {"lambda", g.lambda},
          {"alpha", levels_json(g.alpha)},
          {"beta", levels_json(g.beta)},
          {"gamma", levels_json(g.gamma)},
          {"upsilon", levels_json(g.upsilon)},
          {"residuals", {{"y = alpha + beta + gamma + upsilon", residual(y, {&a, &b, &c, &u})}}}};
}

Json decomposition_to_json(const Martingale& y, const TripleDecomposition& t) {
  return {{"method", "triple"},
          {"eta", adapted_to_json(t.eta)},
          {"zeta", adapted_to_json(t.zeta)},
          {"xi", adapted_to_json(t.xi)},
          {"residuals", {{"dy = eta + zeta + xi", residual(y, {&t.eta.terms, &t.zeta.terms, &t.xi.terms})}}}};
}

Json decomposition_to_json(const Martingale& y, const SquareDecomposition& s) {
  const auto c = diffs(s.column), r = diffs(s.row);
  return {{"method", "square"},
          {"column", levels_json(s.column)},
          {"row", levels_json(s.row)},
          {"residuals", {{"y = y^c + y^r", residual(y, {&c, &r})}}}};
}

Json decomposition_to_json(const Martingale& y, const DavisTriple& t) {
  const auto d = diffs(t.diagonal), c = diffs(t.column), r = diffs(t.row);
  return {{"method", "davis"},
          {"diagonal", levels_json(t.diagonal)},
          {"column", levels_json(t.column)},
          {"row", levels_json(t.row)},
          {"residuals", {{"y = w^d + w^c + w^r", residual(y, {&d, &c, &r})}}}};
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io_error, "cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::io_error, "cannot write " + path);
  out << text;
  if (!out) throw Error(Errc::io_error, "write failed for " + path);
}

Json read_json_file(const std::string& path) {
  try {
    return Json::parse(read_text_file(path));
  } catch (const Json::parse_error& e) {
    throw Error(Errc::io_error, path + ": " + e.what());
  }
}

}  // namespace ncmart
