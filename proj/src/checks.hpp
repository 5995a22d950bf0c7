#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "ncmart/decompose.hpp"
#include "ncmart/verify.hpp"

namespace ncmart::detail {

std::uint64_t splitmix(std::uint64_t z);
std::uint64_t mix(std::uint64_t a, std::uint64_t b);
std::uint64_t hash_name(const std::string& s);

struct JobParams {
  double p = 1.5;
  double q = 1.5;
  OrliczKind phi = OrliczKind::power;
  double B = 1.75;
  std::optional<double> lambda;
};

struct Observation {
  std::string part;
  bool asserting = true;
  double ratio = 0.0;
  int index = -1;
};

/// Per-trial, per-check collector; keeps the largest ratio of each part.
class Sink {
 public:
  void add(const std::string& part, double ratio, int index = -1, bool asserting = true);
  std::vector<Observation> obs;
  bool unstable = false;
  double budget = 0.0;
};

/// Trial state shared by all checks of one trial; derived objects are built on demand.
class TrialContext {
 public:
  TrialContext(FiltrationPtr f, std::uint64_t base_seed, int trial);

  const FiltrationPtr& filtration() const { return f_; }
  int trial() const { return trial_; }
  std::uint64_t seed() const { return seed_; }
  std::mt19937_64 rng(const std::string& check) const;

  const Martingale& x() const { return x_; }
  const Martingale& y() const { return y_; }

  const ProjectionGrid& grid();
  bool has_grid() const { return grid_.has_value(); }
  const TripleDecomposition& tri();
  const DavisTriple& davis();
  const SquareDecomposition& square();
  const Matrix& sigma_zeta();
  const Matrix& sigma_xi();

  const Matrix& abs_xN();
  double x_l1();
  /// tau((1 - e_{k,N})|x_N|)
  double tail_mass(int k);
  /// |e_{k,N} x_N e_{k,N}|_2^2
  double compressed_l2sq(int k);

 private:
  FiltrationPtr f_;
  int trial_;
  std::uint64_t seed_;
  Martingale x_, y_;
  std::optional<ProjectionGrid> grid_;
  std::optional<TripleDecomposition> tri_;
  std::optional<DavisTriple> davis_;
  std::optional<SquareDecomposition> square_;
  std::optional<Matrix> sz_, sx_, absx_;
  std::optional<double> x1_;
};

using EvalFn = void (*)(TrialContext&, const JobParams&, Sink&);

struct CheckEntry {
  CheckInfo info;
  EvalFn eval;
  bool dyadic_only = false;
};

const std::vector<CheckEntry>& registry();
const CheckEntry& entry(const std::string& name);

/// Constant expression and value reported for a check under the given parameters.
std::pair<std::string, double> constant_of(const CheckEntry& e, const JobParams& jp);
/// Whether the check asserts under these parameters (some are report-only for some p or Phi).
bool asserting_for(const CheckEntry& e, const JobParams& jp);

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1].
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

}  // namespace ncmart::detail
