#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ncmart/filtration.hpp"
#include "ncmart/orlicz.hpp"

namespace ncmart {

struct FiltrationSpec {
  FiltrationKind kind = FiltrationKind::tensor;
  int levels = 3;
  /// dyadic: d = 2^depth (0 picks max(levels, 4)).
  int depth = 0;
  /// pinching: interval lengths per level; empty picks the d = 12 chain 1 | 2 | 4 | 12.
  std::vector<std::vector<int>> blocks;

  FiltrationPtr build() const;
  std::string label() const;

  static FiltrationSpec tensor(int levels = 3);
  static FiltrationSpec dyadic(int depth = 4, int levels = 4);
  static FiltrationSpec pinching(int levels = 3);
};

struct TrialConfig {
  FiltrationSpec filtration;
  int trials = 200;
  std::uint64_t seed = 42;
  double p = 1.5;
  double B = 1.75;
  /// Fixed Gundy cutoff; the default sweeps lambda = 2^k.
  std::optional<double> lambda;
  double q = 1.5;
  OrliczKind phi = OrliczKind::power;
  double tol = 1e-7;
  /// 0 = hardware concurrency.
  int threads = 0;
  bool timing = false;
};

struct CheckPart {
  std::string name;
  bool asserting = true;
  double worst_ratio = 0.0;
  int witness_trial = -1;
  std::uint64_t witness_seed = 0;
  /// Level, k or sample index where the worst ratio occurred (-1 if not applicable).
  int witness_index = -1;
  bool pass = true;
};

struct CheckReport {
  std::string check;
  std::string filtration;
  /// "p", "q", "B" or empty.
  std::string param_name;
  double param = 0.0;
  std::string variant;
  std::string constant_expr;
  double constant_value = 0.0;
  double worst_ratio = 0.0;
  std::uint64_t witness_seed = 0;
  int witness_trial = -1;
  bool pass = true;
  bool asserting = true;
  int trials = 0;
  double truncation_budget = 0.0;
  bool unstable = false;
  std::optional<double> wall_ms;
  std::vector<CheckPart> parts;
};

struct CheckInfo {
  std::string name;
  std::string location;
  std::string anchor;
  std::string constant_expr;
  std::vector<std::string> modules;
  bool asserting = true;
  /// Parameter the check is swept over: "p", "q", "B" or empty.
  std::string param;
};

const std::vector<CheckInfo>& list_checks();
/// Throws UnknownCheck.
const CheckInfo& find_check(const std::string& name);

CheckReport run_check(const std::string& name, const TrialConfig& cfg);
/// One report per (check, p) for p-swept checks, one per check otherwise.
std::vector<CheckReport> run_checks(const std::vector<std::string>& names, const TrialConfig& cfg,
                                    const std::vector<double>& ps);

struct SuiteConfig {
  std::uint64_t seed = 42;
  int trials = 200;
  int threads = 0;
  bool timing = false;
  double tol = 1e-7;
  std::vector<FiltrationSpec> filtrations{FiltrationSpec::tensor(), FiltrationSpec::dyadic(),
                                          FiltrationSpec::pinching()};
  std::vector<double> p_grid{1.1, 1.5, 1.9};
  std::vector<double> wang_grid{0.5, 1.0, 1.5, 2.0};
  std::vector<double> q_grid{1.2, 1.5, 1.8};
  /// Also run the report-only checks.
  bool reports = true;
};

std::vector<CheckReport> run_suite(const SuiteConfig& cfg);

/// Conjunction of pass over asserting reports.
bool all_pass(const std::vector<CheckReport>& reports);

enum class ReportFormat { json, csv };

std::string render_report(const std::vector<CheckReport>& reports, ReportFormat format);
/// Throws IoError.
void emit_report(const std::vector<CheckReport>& reports, ReportFormat format, const std::string& path);
std::vector<CheckReport> parse_report_json(const std::string& text);

namespace constants {
double weak_type_c(double B);          // 2 + 2B^2 + 4B/(B-1)
double lem_p(double p);                // 2^{(p-1)^2} / (2^{p-1}-1)^p
double lem_last(double p);             // 2^{p^2+1} / ((1-2^{p-2})(2^{p-1}-1)^p)
double K_zeta(double p);               // 2^{p^2}/(2^{p-1}-1)^p [8 + 6/(1-2^{p-2})]
double K_eta(double p);                // 2^{p^2+p}/(2^{p-1}-1)^p [77 + 24/(1-2^{p-2})]
double K_square(double p);             // (2^p - 1)[4 lem_last + (160 sqrt2 + 26) lem_p]
double main_weak_S();                  // 10 + 160 sqrt2
double strong_cp(double p);
double wang(double p);                 // sqrt(2/p)
double hh(double p);                   // 3^{(1-p)/p} sqrt(2/p) for p < 1, sqrt(2/p) otherwise
}  // namespace constants

}  // namespace ncmart
