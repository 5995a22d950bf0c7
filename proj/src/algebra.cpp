#include "ncmart/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace ncmart {

namespace {

constexpr double kMeetTol = 1e-8;
constexpr double kRankTol = 1e-10;
constexpr double kPsdTol = 1e-9;

double max_abs(const Matrix& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }

void require_self_adjoint(const Matrix& a, const char* op) {
  if (a.rows() != a.cols())
    throw Error(Errc::not_self_adjoint, std::string(op) + ": matrix is not square");
  if (!is_self_adjoint(a, 1e-9 * (1.0 + max_abs(a))))
    throw Error(Errc::not_self_adjoint, std::string(op) + ": asymmetry exceeds tolerance");
}

}  // namespace

double normalized_trace(const Matrix& a) {
  if (a.rows() == 0) return 0.0;
  return a.trace() / static_cast<double>(a.rows());
}

double op_norm(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(a);
  return svd.singularValues()(0);
}

bool is_self_adjoint(const Matrix& a, double tol) {
  if (a.rows() != a.cols()) return false;
  return max_abs(a - a.transpose()) <= tol;
}

Matrix identity(int d) { return Matrix::Identity(d, d); }

Eigensystem eigh(const Matrix& a) {
  require_self_adjoint(a, "eigh");
  Matrix s = 0.5 * (a + a.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> es(s);
  if (es.info() != Eigen::Success)
    throw Error(Errc::eigen_failure, "symmetric eigensolver did not converge");
  return {es.eigenvalues(), es.eigenvectors()};
}

Matrix spectral_projection(const Matrix& a, double lo, double hi) {
  const int d = static_cast<int>(a.rows());
  if (lo == -kInf && hi == kInf) {
    require_self_adjoint(a, "spectral_projection");
    return identity(d);
  }
  Eigensystem es = eigh(a);
  const double scale = es.values.size() ? es.values.cwiseAbs().maxCoeff() : 0.0;
  const double tol = 1e-12 * (1.0 + scale);
  Matrix p = Matrix::Zero(d, d);
  for (int j = 0; j < d; ++j) {
    const double v = es.values(j);
    if (v >= lo - tol && v <= hi + tol) p += es.vectors.col(j) * es.vectors.col(j).transpose();
  }
  return p;
}

SingularProfile singular_values(const Matrix& a) {
  if (a.size() == 0) return {Vector()};
  Eigen::JacobiSVD<Matrix> svd(a);
  if (!svd.singularValues().allFinite())
    throw Error(Errc::eigen_failure, "singular value decomposition produced non-finite values");
  return {svd.singularValues()};
}

double distribution(const SingularProfile& s, double t) {
  const double thr = t + 1e-12 * (1.0 + t);
  int count = 0;
  for (int j = 0; j < s.dim(); ++j)
    if (s.values(j) > thr) ++count;
  return s.dim() ? static_cast<double>(count) / s.dim() : 0.0;
}

double distribution(const Matrix& a, double t) { return distribution(singular_values(a), t); }

double lp_norm(const SingularProfile& s, double p) {
  if (!(p > 0)) throw Error(Errc::bad_exponent, "lp_norm requires p > 0");
  if (s.dim() == 0) return 0.0;
  if (std::isinf(p)) return s.values(0);
  double acc = 0.0;
  for (int j = 0; j < s.dim(); ++j)
    if (s.values(j) > 0) acc += std::pow(s.values(j), p);
  return std::pow(acc / s.dim(), 1.0 / p);
}

double lp_norm(const Matrix& a, double p) { return lp_norm(singular_values(a), p); }

double weak_l1_norm(const SingularProfile& s) {
  double best = 0.0;
  const double d = s.dim();
  for (int j = 0; j < s.dim(); ++j) best = std::max(best, (j + 1) / d * s.values(j));
  return best;
}

double weak_l1_norm(const Matrix& a) { return weak_l1_norm(singular_values(a)); }

Matrix apply_function(const Matrix& a, const std::function<double(double)>& f) {
  Eigensystem es = eigh(a);
  Vector fv(es.values.size());
  for (int j = 0; j < es.values.size(); ++j) {
    fv(j) = f(es.values(j));
    if (!std::isfinite(fv(j)))
      throw Error(Errc::domain_error,
                  "function undefined at eigenvalue " + std::to_string(es.values(j)));
  }
  return es.vectors * fv.asDiagonal() * es.vectors.transpose();
}

Matrix abs(const Matrix& a) {
  if (a.size() == 0) return a;
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeThinV);
  const Matrix& v = svd.matrixV();
  return v * svd.singularValues().asDiagonal() * v.transpose();
}

Matrix psd_sqrt(const Matrix& a) {
  return apply_function(a, [](double t) { return t > 0 ? std::sqrt(t) : 0.0; });
}

Matrix meet(const Matrix& p, const Matrix& q) {
  Eigensystem es = eigh(p + q);
  const int d = static_cast<int>(p.rows());
  Matrix out = Matrix::Zero(d, d);
  for (int j = 0; j < d; ++j)
    if (es.values(j) >= 2.0 - kMeetTol) out += es.vectors.col(j) * es.vectors.col(j).transpose();
  return out;
}

Matrix meet(const std::vector<Matrix>& ps) {
  if (ps.empty()) throw Error(Errc::bad_params, "meet of an empty list");
  if (ps.size() == 1) {
    Matrix b = range_basis(ps.front());
    return b * b.transpose();
  }
  Matrix acc = ps.front();
  for (std::size_t i = 1; i < ps.size(); ++i) acc = meet(acc, ps[i]);
  return acc;
}

Matrix join(const std::vector<Matrix>& ps) {
  if (ps.empty()) return Matrix();
  const int d = static_cast<int>(ps.front().rows());
  std::vector<Matrix> comps;
  comps.reserve(ps.size());
  for (const auto& p : ps) comps.push_back(identity(d) - p);
  return identity(d) - meet(comps);
}

Matrix support(const Matrix& a, SupportSide side) {
  const int d = static_cast<int>(a.rows());
  if (a.size() == 0) return a;
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Vector& s = svd.singularValues();
  if (!s.allFinite()) throw Error(Errc::eigen_failure, "support: non-finite singular values");
  const double tol = kRankTol * (1.0 + s(0));
  int r = 0;
  while (r < s.size() && s(r) > tol && s(r) > 0) ++r;
  const Matrix& basis = side == SupportSide::left ? svd.matrixU() : svd.matrixV();
  if (r == 0) return Matrix::Zero(d, d);
  Matrix b = basis.leftCols(r);
  return b * b.transpose();
}

double min_eigenvalue(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  return eigh(a).values(0);
}

PsdComparison psd_leq(const Matrix& a, const Matrix& b) {
  require_self_adjoint(a, "psd_leq");
  require_self_adjoint(b, "psd_leq");
  const double margin = min_eigenvalue(b - a);
  const double tol = kPsdTol * (1.0 + op_norm(a) + op_norm(b));
  return {margin >= -tol, margin};
}

Matrix range_basis(const Matrix& p) {
  Eigensystem es = eigh(p);
  const int d = static_cast<int>(p.rows());
  int r = 0;
  for (int j = 0; j < d; ++j)
    if (es.values(j) > 0.5) ++r;
  return es.vectors.rightCols(r);
}

}  // namespace ncmart
