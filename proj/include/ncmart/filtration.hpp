#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "ncmart/algebra.hpp"

namespace ncmart {

enum class FiltrationKind { dyadic, tensor, pinching, generic };

const char* kind_name(FiltrationKind kind);
FiltrationKind parse_kind(const std::string& name);

/// Increasing chain M_1 c ... c M_N of unital *-subalgebras of d x d matrices.
/// The ambient algebra is M_N; E_N is the identity on it. Levels are 1-based and
/// condexp(0, .) aliases level 1.
class Filtration {
 public:
  /// d = 2^L, level n is the diagonal algebra constant on 2^n consecutive blocks.
  static std::shared_ptr<const Filtration> dyadic(int L, int levels);
  /// d = 2^levels, level n = M_2^{(x)n} (x) 1.
  static std::shared_ptr<const Filtration> tensor(int levels);
  /// block_sizes[n-1] lists the interval lengths of partition P_n, coarsening in n.
  static std::shared_ptr<const Filtration> pinching(std::vector<std::vector<int>> block_sizes);
  /// spanning[n-1] spans M_n; validated to be a unital *-subalgebra within 1e-8.
  static std::shared_ptr<const Filtration> generic(int dim,
                                                   const std::vector<std::vector<Matrix>>& spanning);

  FiltrationKind kind() const { return kind_; }
  int dim() const { return dim_; }
  int levels() const { return levels_; }
  int dyadic_depth() const { return depth_; }
  const std::vector<std::vector<int>>& blocks() const { return blocks_; }

  Matrix condexp(int n, const Matrix& a) const;
  /// A spanning set of M_n (matrix units or block indicators).
  std::vector<Matrix> spanning_set(int n) const;
  /// Elements g with E_{n-1}-invariance and commuting with M_n are exactly
  /// the admissible element symbols; this returns a spanning set of M_{n-1} cap M_n'.
  std::vector<Matrix> relative_commutant(int n) const;

 private:
  Filtration() = default;
  void check_level(int n) const;

  FiltrationKind kind_ = FiltrationKind::dyadic;
  int dim_ = 0;
  int levels_ = 0;
  int depth_ = 0;
  std::vector<std::vector<int>> blocks_;      // dyadic/pinching: interval lengths per level
  std::vector<Matrix> generic_bases_;         // generic: d^2 x m orthonormal columns per level
  std::vector<std::vector<Matrix>> generic_spans_;
};

using FiltrationPtr = std::shared_ptr<const Filtration>;

class Martingale {
 public:
  Martingale() = default;
  /// x[n-1] = x_n. Throws BadParams when the martingale residual exceeds 1e-8.
  Martingale(FiltrationPtr f, std::vector<Matrix> x);
  static Martingale from_final(FiltrationPtr f, const Matrix& final_element);
  static Martingale from_differences(FiltrationPtr f, const std::vector<Matrix>& diffs);
  static Martingale zero(FiltrationPtr f);

  const Filtration& filtration() const { return *f_; }
  const FiltrationPtr& filtration_ptr() const { return f_; }
  int levels() const { return f_ ? f_->levels() : 0; }
  int dim() const { return f_ ? f_->dim() : 0; }

  /// x_n for 0 <= n <= N with x_0 = 0.
  const Matrix& at(int n) const;
  /// dx_n for 1 <= n <= N.
  const Matrix& diff(int n) const;
  const Matrix& final() const { return x_.back(); }

  bool self_adjoint(double tol = 1e-10) const;
  /// max_n |E_n(x_{n+1}) - x_n| and |E_{n-1}(dx_n)| for n >= 2.
  double martingale_residual() const;
  Martingale scaled(double c) const;
  Martingale adjoint() const;

 private:
  FiltrationPtr f_;
  std::vector<Matrix> x_;   // x_[0] = 0, x_[n] = x_n
  std::vector<Matrix> dx_;  // dx_[0] unused
};

/// A_n in M_n, not necessarily martingale differences. terms[n-1] = a_n.
struct AdaptedSequence {
  FiltrationPtr filtration;
  std::vector<Matrix> terms;

  const Matrix& operator[](int n) const { return terms.at(n - 1); }
  int levels() const { return static_cast<int>(terms.size()); }
  double adaptedness_residual() const;
};

enum class Law { gaussian, uniform };
enum class Normalize { none, l1, linf };

Martingale random_martingale(const FiltrationPtr& f, std::uint64_t seed, Law law = Law::gaussian,
                             Normalize normalize = Normalize::none);

struct MartingalePair {
  Martingale x;
  Martingale y;
};

/// dy_n = eps_{n-1} dx_n; symbols[n-1] multiplies dx_n.
MartingalePair transform_pair(const Martingale& x, const std::vector<double>& symbols);
/// dy_n = xi_{n-1} dx_n with xi_{n-1} in M_{n-1} cap M_n', self-adjoint, |xi| <= 1.
MartingalePair transform_pair(const Martingale& x, const std::vector<Matrix>& symbols);

enum class SubordinationMode { very_weak, weak_sampled, ds_sampled };

struct SubordinationCertificate {
  SubordinationMode mode;
  bool holds;
  double worst_margin;
  int witness_level;
  int witness_sample;  // -1 for structured candidates or deterministic checks
  int samples;
};

/// Structured candidate projections R in M_{n-1}, indexed by n (1..N); optional.
using CandidateSets = std::vector<std::vector<Matrix>>;

SubordinationCertificate check_subordination(const Martingale& x, const Martingale& y,
                                             SubordinationMode mode, int samples,
                                             std::uint64_t seed,
                                             const CandidateSets& candidates = {});

}  // namespace ncmart
