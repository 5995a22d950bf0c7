#include "ncmart/cuculescu.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace ncmart {

namespace {

/// Largest sine of the angle between a kept direction and the other subspace.
constexpr double kMeetSin = 1e-9;

/// Orthonormal bases Q_n (d x r_n) of the ranges of q_n^{(lambda)}, Q_0 = I.
std::vector<Matrix> cuculescu_bases(const Martingale& x, double lambda) {
  const int d = x.dim();
  std::vector<Matrix> bases{identity(d)};
  for (int n = 1; n <= x.levels(); ++n) {
    const Matrix& Q = bases.back();
    if (Q.cols() == 0) {
      bases.push_back(Q);
      continue;
    }
    Matrix b = Q.transpose() * x.at(n) * Q;
    Eigensystem es = eigh(0.5 * (b + b.transpose()));
    const double scale = es.values.cwiseAbs().maxCoeff();
    const double tol = 1e-12 * (1.0 + scale);
    std::vector<int> keep;
    for (int j = 0; j < es.values.size(); ++j)
      if (std::abs(es.values(j)) <= lambda + tol) keep.push_back(j);
    Matrix w(es.vectors.rows(), static_cast<int>(keep.size()));
    for (std::size_t j = 0; j < keep.size(); ++j) w.col(static_cast<int>(j)) = es.vectors.col(keep[j]);
    bases.push_back(Q * w);
  }
  return bases;
}

/// Orthonormal basis of range(V) cap range(Q), both given by orthonormal bases; the
/// result is expressed inside range(V), so nesting in V is exact.
Matrix meet_in(const Matrix& V, const Matrix& Q) {
  if (V.cols() == 0 || Q.cols() == 0) return Matrix(V.rows(), 0);
  Matrix R = V - Q * (Q.transpose() * V);
  Eigen::JacobiSVD<Matrix> svd(R, Eigen::ComputeFullV);
  const Vector& s = svd.singularValues();
  if (!s.allFinite()) throw Error(Errc::eigen_failure, "meet: non-finite singular values");
  std::vector<int> keep;
  for (int j = 0; j < s.size(); ++j)
    if (s(j) <= kMeetSin) keep.push_back(j);
  Matrix w(V.cols(), static_cast<int>(keep.size()));
  for (std::size_t j = 0; j < keep.size(); ++j) w.col(static_cast<int>(j)) = svd.matrixV().col(keep[j]);
  return V * w;
}

Matrix projector(const Matrix& basis) {
  if (basis.cols() == 0) return Matrix::Zero(basis.rows(), basis.rows());
  return basis * basis.transpose();
}

}  // namespace

CuculescuFamily cuculescu_projections(const Martingale& x, double lambda) {
  if (!(lambda > 0)) throw Error(Errc::bad_params, "Cuculescu projections need lambda > 0");
  if (!x.self_adjoint()) throw Error(Errc::not_self_adjoint, "Cuculescu projections need x = x*");
  CuculescuFamily fam;
  fam.lambda = lambda;
  for (const auto& b : cuculescu_bases(x, lambda)) fam.q.push_back(projector(b));
  return fam;
}

int stabilization_index(const Martingale& x) {
  double m = 0.0;
  for (int n = 1; n <= x.levels(); ++n) m = std::max(m, op_norm(x.at(n)));
  if (m <= 1.0) return 0;
  int k = static_cast<int>(std::ceil(std::log2(m)));
  while (std::ldexp(1.0, k) < m) ++k;
  while (k > 0 && std::ldexp(1.0, k - 1) >= m) --k;
  return k;
}

ProjectionGrid projection_grid(const Martingale& x, int i_min) {
  if (i_min > 0) throw Error(Errc::bad_params, "i_min must be <= 0");
  if (!x.self_adjoint()) throw Error(Errc::not_self_adjoint, "projection grid needs x = x*");
  ProjectionGrid g;
  const int N = x.levels();
  const int d = x.dim();
  g.k_max_ = stabilization_index(x);
  g.i_min_ = i_min;
  g.levels_ = N;
  g.dim_ = d;
  g.id_ = identity(d);
  g.zero_ = Matrix::Zero(d, d);

  // Walk from k_max down, keeping orthonormal bases of e_{i,n}; each new meet is
  // taken inside the range of the previous one, so the flag stays nested.
  std::vector<std::vector<Matrix>> e_rev, pi_rev, q_rev;
  std::vector<Matrix> prev(N + 1, identity(d));
  int i = g.k_max_;
  for (;; --i) {
    std::vector<Matrix> qb = cuculescu_bases(x, std::ldexp(1.0, i));
    std::vector<Matrix> qs, es, pis;
    qs.push_back(g.id_);
    es.push_back(g.id_);
    std::vector<Matrix> cur(N + 1);
    cur[0] = identity(d);
    bool all_zero = true;
    for (int n = 1; n <= N; ++n) {
      qs.push_back(projector(qb[n]));
      if (i == g.k_max_) {
        if (qb[n].cols() != d)
          throw Error(Errc::eigen_failure,
                      "Cuculescu projection at 2^k_max is not the identity (level " +
                          std::to_string(n) + ")");
        cur[n] = identity(d);
      } else {
        // e_{i,n} lies below e_{i+1,n}, e_{i,n-1} and q_n^{(2^i)}.
        const Matrix A = n >= 2 ? meet_in(prev[n], cur[n - 1]) : prev[n];
        cur[n] = meet_in(A, qb[n]);
      }
      if (cur[n].cols() > 0) all_zero = false;
      es.push_back(projector(cur[n]));
    }
    e_rev.push_back(es);
    q_rev.push_back(qs);
    prev = cur;
    if (all_zero) break;
    if (i == i_min) {
      g.budget_ = std::ldexp(1.0, 2 * i_min);
      break;
    }
  }
  g.lowest_ = i;
  std::reverse(e_rev.begin(), e_rev.end());
  std::reverse(q_rev.begin(), q_rev.end());
  g.e_ = std::move(e_rev);
  g.q_ = std::move(q_rev);
  // pi_{i,n} = e_{i,n} - e_{i-1,n}; below the computed window e vanishes.
  g.pi_.resize(g.e_.size());
  for (std::size_t t = 0; t < g.e_.size(); ++t) {
    g.pi_[t].resize(N + 1);
    for (int n = 0; n <= N; ++n)
      g.pi_[t][n] = t == 0 ? (n == 0 ? g.zero_ : g.e_[t][n]) : Matrix(g.e_[t][n] - g.e_[t - 1][n]);
  }
  g.build_partitions();
  return g;
}

void ProjectionGrid::build_partitions() {
  p_.assign(k_max_ + 1, std::vector<Matrix>(levels_ + 1));
  for (int k = 0; k <= k_max_; ++k)
    for (int n = 0; n <= levels_; ++n) p_[k][n] = k == 0 ? e(0, n) : pi(k, n);
}

const Matrix& ProjectionGrid::e(int i, int n) const {
  if (n < 0 || n > levels_) throw Error(Errc::index_out_of_range, "grid level out of range");
  if (n == 0 || i > k_max_) return id_;
  if (i < lowest_) return zero_;
  return e_[i - lowest_][n];
}

const Matrix& ProjectionGrid::pi(int i, int n) const {
  if (n < 0 || n > levels_) throw Error(Errc::index_out_of_range, "grid level out of range");
  if (n == 0 || i > k_max_ || i < lowest_) return zero_;
  return pi_[i - lowest_][n];
}

const Matrix& ProjectionGrid::p(int k, int n) const {
  if (k < 0 || k > k_max_ || n < 0 || n > levels_)
    throw Error(Errc::index_out_of_range, "grid index out of range");
  return p_[k][n];
}

std::vector<Matrix> ProjectionGrid::partition(int n) const {
  std::vector<Matrix> out;
  for (int k = 0; k <= k_max_; ++k) out.push_back(p(k, n));
  return out;
}

const Matrix& ProjectionGrid::q(int k, int n) const {
  if (!has_q(k) || n < 0 || n > levels_)
    throw Error(Errc::index_out_of_range, "Cuculescu family not computed at this index");
  return q_[k - lowest_][n];
}

ProjectionGrid ProjectionGrid::shifted(int j) const {
  if (j < 0) throw Error(Errc::bad_params, "grid shift must be nonnegative");
  ProjectionGrid g = *this;
  g.k_max_ = k_max_ + j;
  g.lowest_ = lowest_ + j;
  g.i_min_ = i_min_ + j;
  g.build_partitions();
  return g;
}

}  // namespace ncmart
