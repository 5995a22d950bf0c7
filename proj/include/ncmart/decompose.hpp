#pragma once

#include <vector>

#include "ncmart/cuculescu.hpp"
#include "ncmart/filtration.hpp"

namespace ncmart {

enum class GundyForm {
  /// alpha, beta replaced by their real parts, gamma and upsilon paired so that gamma* = upsilon.
  symmetrized,
  /// The four displayed terms as they stand.
  literal,
};

struct GundyDecomposition {
  double lambda = 0.0;
  Martingale alpha, beta, gamma, upsilon;
};

/// y = alpha + beta + gamma + upsilon built from q = q^{(lambda)}(x). Level 1 is left uncentered.
GundyDecomposition gundy(const Martingale& x, const Martingale& y, double lambda,
                         GundyForm form = GundyForm::symmetrized);
GundyDecomposition gundy(const Martingale& y, const CuculescuFamily& q,
                         GundyForm form = GundyForm::symmetrized);

/// dy_n = eta_n + zeta_n + xi_n; zeta_1 = xi_1 = 0 and eta_1 = y_1.
struct TripleDecomposition {
  AdaptedSequence eta, zeta, xi;
};

TripleDecomposition triple(const Martingale& x, const Martingale& y);
TripleDecomposition triple(const Martingale& y, const ProjectionGrid& grid);

struct SquareDecomposition {
  Martingale column, row;
};

SquareDecomposition square_pair(const Martingale& x, const Martingale& y);
SquareDecomposition square_pair(const Martingale& y, const ProjectionGrid& grid);

struct DavisTriple {
  Martingale diagonal, column, row;
};

DavisTriple davis_triple(const Martingale& x, const Martingale& y);
DavisTriple davis_triple(const Martingale& y, const ProjectionGrid& grid);
DavisTriple davis_triple(const Martingale& y, const TripleDecomposition& t);

/// sum_{i <= j} p_i a p_j. Throws NotDisjoint when |p_i p_j| > 1e-8 for i != j.
Matrix triangular_truncation(const Matrix& a, const std::vector<Matrix>& P);

/// Per-level pieces of eta = U Pi_0 V in the amplified algebra; index n-1 holds level n.
struct EtaFactorization {
  int k = 0;
  std::vector<Matrix> U, V, pi_full, pi_k;
  /// r_{i,n}, l_{i,n}: right/left supports of p_{i,n} - p_{i,n-1} p_{i,n}; [n-1][i], n >= 2.
  std::vector<std::vector<Matrix>> right, left;
};

EtaFactorization eta_factorization(const Martingale& x, const Martingale& y, int k);
EtaFactorization eta_factorization(const Martingale& x, const Martingale& y,
                                   const ProjectionGrid& grid, int k);

}  // namespace ncmart
