#pragma once

#include <random>
#include <vector>

#include "ncmart/algebra.hpp"
#include "ncmart/filtration.hpp"

namespace ncmart::testing {

inline Matrix diag(std::initializer_list<double> v) {
  Vector d(static_cast<int>(v.size()));
  int i = 0;
  for (double x : v) d(i++) = x;
  return d.asDiagonal();
}

inline Matrix gaussian(int d, std::mt19937_64& g, int cols = -1) {
  std::normal_distribution<double> nd;
  Matrix a(d, cols < 0 ? d : cols);
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) a(i, j) = nd(g);
  return a;
}

inline Matrix symmetric(int d, std::mt19937_64& g) {
  Matrix a = gaussian(d, g);
  return 0.5 * (a + a.transpose());
}

/// Orthogonal projection onto the span of r random vectors.
inline Matrix random_projection(int d, int r, std::mt19937_64& g) {
  if (r == 0) return Matrix::Zero(d, d);
  Eigen::HouseholderQR<Matrix> qr(gaussian(d, g, r));
  Matrix q = qr.householderQ() * Matrix::Identity(d, r);
  return q * q.transpose();
}

inline double max_abs(const Matrix& a) { return a.size() ? a.cwiseAbs().maxCoeff() : 0.0; }

/// DX4: dyadic d = 4, N = 2, x_2 = diag(3, -1, 0.5, 0.5).
inline Martingale dx4() {
  return Martingale::from_final(Filtration::dyadic(2, 2), diag({3, -1, 0.5, 0.5}));
}

inline std::vector<FiltrationPtr> small_filtrations() {
  return {Filtration::tensor(3), Filtration::dyadic(4, 4),
          Filtration::pinching({std::vector<int>(6, 2), std::vector<int>(3, 4), {12}})};
}

}  // namespace ncmart::testing
