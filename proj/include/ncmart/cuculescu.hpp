#pragma once

#include <vector>

#include "ncmart/filtration.hpp"

namespace ncmart {

/// q_0 = 1, q_n = q_{n-1} chi_[-lambda,lambda](q_{n-1} x_n q_{n-1}).
struct CuculescuFamily {
  double lambda = 0.0;
  std::vector<Matrix> q;  // q[0..N]
};

CuculescuFamily cuculescu_projections(const Martingale& x, double lambda);

/// Smallest k >= 0 with 2^k >= max_n |x_n|.
int stabilization_index(const Martingale& x);

/// Cuculescu families at lambda = 2^k together with
///   e_{i,n} = meet_{k >= i} q_n^{(2^k)},  pi_{i,n} = e_{i,n} - e_{i-1,n},
///   p_{0,n} = e_{0,n},  p_{k,n} = pi_{k,n} (k >= 1).
/// Level 0 carries e_{i,0} = 1. Indices above k_max give the identity; indices
/// below the last computed one give zero.
class ProjectionGrid {
 public:
  ProjectionGrid() = default;

  int k_max() const { return k_max_; }
  int i_min() const { return i_min_; }
  /// Smallest index whose e_{i,n} were computed.
  int lowest() const { return lowest_; }
  int levels() const { return levels_; }
  int dim() const { return dim_; }
  /// Mass bound for the truncated tail below i_min: 2^{2 i_min} if truncation happened, else 0.
  double truncation_budget() const { return budget_; }

  const Matrix& e(int i, int n) const;
  const Matrix& pi(int i, int n) const;
  const Matrix& p(int k, int n) const;
  /// (p_{0,n}, ..., p_{k_max,n})
  std::vector<Matrix> partition(int n) const;

  bool has_q(int k) const { return k >= lowest_ && k <= k_max_; }
  /// Cuculescu projection q_n^{(2^k)}.
  const Matrix& q(int k, int n) const;

  /// Grid of 2^j x, obtained by re-indexing (q^{(2^i)}(2^j x) = q^{(2^{i-j})}(x)); j >= 0.
  ProjectionGrid shifted(int j) const;

  friend ProjectionGrid projection_grid(const Martingale& x, int i_min);

 private:
  int k_max_ = 0;
  int i_min_ = -40;
  int lowest_ = 0;
  int levels_ = 0;
  int dim_ = 0;
  double budget_ = 0.0;
  Matrix id_, zero_;
  std::vector<std::vector<Matrix>> e_;   // [i - lowest][n]
  std::vector<std::vector<Matrix>> pi_;  // [i - lowest][n]
  std::vector<std::vector<Matrix>> q_;   // [i - lowest][n]
  std::vector<std::vector<Matrix>> p_;   // [k][n], 0 <= k <= k_max
  void build_partitions();
};

ProjectionGrid projection_grid(const Martingale& x, int i_min = -40);

}  // namespace ncmart
