#pragma once

#include <optional>
#include <vector>

#include "ncmart/filtration.hpp"

namespace ncmart {

enum class Side { column, row };

/// (sum_{k<=upto} |dx_k|^2)^{1/2}; row uses dx_k*. upto < 0 means N.
Matrix square_fn(const Martingale& x, Side side, int upto = -1);
/// (sum_{k<=upto} E_{k-1}|dx_k|^2)^{1/2} with E_0 = E_1.
Matrix cond_square_fn(const Martingale& x, Side side, int upto = -1);
/// Squared versions, no square root taken.
Matrix square_fn_sq(const Martingale& x, Side side, int upto = -1);
Matrix cond_square_fn_sq(const Martingale& x, Side side, int upto = -1);

/// (sum_k E_{k-1}|a_k|^2)^{1/2}; row uses a_k a_k*.
Matrix sigma_c(const AdaptedSequence& a, Side side);

enum class HardyNorm { hpc, hpr, hpd, Hpc, Hpr };

double hardy_norm(const Martingale& x, HardyNorm which, double p);

enum class SeqWeak { cond_col, cond_row, diag_amplified };

/// diag_amplified = sup_lambda lambda * sum_n tau(chi_(lambda,inf)(|s_n|)), evaluated on breakpoints.
double seq_weak_norm(const AdaptedSequence& s, SeqWeak which);

/// Pieces of a decomposition; absent pieces count as zero.
struct MixedParts {
  std::optional<Martingale> column, row, diagonal;
};

enum class MixedNorm { hp, Hp };

/// Sum of the piece norms at the supplied decomposition of `target`.
/// Throws ReconstructionMismatch if the pieces do not add up to target (1e-8).
double mixed_upper_bound(const Martingale& target, const MixedParts& parts, MixedNorm which,
                         double p);

struct WeightFunctional {
  double value = 0.0;
  std::vector<double> chain;   // |x_k|_p, k = 1..N
  std::vector<double> masses;  // tau(w_{k+1}), k = 1..N (w_{N+1} = w_N)
  double moment = 0.0;         // tau((s_c^2 + eps^2)^{p/2})
};

/// value^2 = tau(sum_n w_n^{1-2/p} |dx_n|^2) with w_n = (s_{c,n}^2 + eps^2)^{p/2}.
WeightFunctional weight_functional(const Martingale& x, double p, double eps_reg);

}  // namespace ncmart
