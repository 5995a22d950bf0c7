#include <gtest/gtest.h>

#include <cmath>
#include <algorithm>
#include <set>

#include <json.hpp>

#include "ncmart/verify.hpp"

using namespace ncmart;

namespace {

TrialConfig tensor_cfg(int trials, std::uint64_t seed) {
  TrialConfig c;
  c.filtration = FiltrationSpec::tensor(3);
  c.trials = trials;
  c.seed = seed;
  c.threads = 1;
  return c;
}

const CheckPart* part(const CheckReport& r, const std::string& name) {
  for (const auto& p : r.parts)
    if (p.name == name) return &p;
  return nullptr;
}

}  // namespace

TEST(Constants, Values) {
  EXPECT_NEAR(constants::weak_type_c(1.75), 17.458333333333333, 1e-12);
  EXPECT_NEAR(constants::main_weak_S(), 10 + 160 * std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(constants::main_weak_S(), 236.2742, 1e-4);
  EXPECT_NEAR(constants::wang(1.0), std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(constants::wang(2.0), 1.0, 1e-15);
  EXPECT_NEAR(constants::hh(0.5), std::pow(3.0, 1.0) * 2.0, 1e-12);
  EXPECT_NEAR(constants::hh(1.5), constants::wang(1.5), 1e-15);
  const double p = 1.5, r = 1 - std::exp2(p - 2), a = std::exp2(p - 1) - 1;
  EXPECT_NEAR(constants::lem_p(p), std::exp2(0.25) / std::pow(a, p), 1e-12);
  EXPECT_NEAR(constants::lem_last(p), std::exp2(p * p + 1) / (r * std::pow(a, p)), 1e-9);
  const double cp = std::exp2(p + 1) / a * (std::pow(8 + 6 / r, 1 / p) + std::pow(77 + 24 / r, 1 / p));
  EXPECT_NEAR(constants::strong_cp(p), cp, 1e-9 * cp);
  EXPECT_NEAR(constants::strong_cp(p), 528.1, 0.1);
}

TEST(RunCheck, WeakTypePasses) {
  TrialConfig c = tensor_cfg(100, 7);
  c.B = 1.75;
  CheckReport r = run_check("weaktype_11", c);
  EXPECT_TRUE(r.pass);
  EXPECT_EQ(r.trials, 100);
  EXPECT_NEAR(r.constant_value, 17.458333333333333, 1e-9);
  EXPECT_LE(r.worst_ratio, 1.0);
  EXPECT_EQ(r.param_name, "B");
  EXPECT_FALSE(r.wall_ms.has_value());
}

TEST(RunCheck, GundyLargeLambdaHasNoBeta) {
  TrialConfig c = tensor_cfg(10, 3);
  c.lambda = 1e6;
  CheckReport r = run_check("gundy_bounds", c);
  EXPECT_TRUE(r.pass);
  ASSERT_NE(part(r, "beta"), nullptr);
  EXPECT_EQ(part(r, "beta")->worst_ratio, 0.0);
  EXPECT_EQ(part(r, "gamma")->worst_ratio, 0.0);
}

TEST(RunCheck, WangEqualityAtTwo) {
  TrialConfig c = tensor_cfg(20, 5);
  c.p = 2.0;
  CheckReport r = run_check("wang", c);
  ASSERT_NE(part(r, "equality_lp"), nullptr);
  EXPECT_LE(part(r, "equality_lp")->worst_ratio, 1.0);
  EXPECT_LE(part(r, "equality_Hpc")->worst_ratio, 1.0);
  EXPECT_TRUE(r.pass);
}

TEST(RunCheck, Errors) {
  TrialConfig c = tensor_cfg(2, 1);
  try {
    run_check("classical_sanity", c);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::bad_params);
  }
  try {
    run_check("nosuch", c);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::unknown_check);
  }
  c.trials = 0;
  EXPECT_THROW(run_check("weaktype_11", c), Error);
}

TEST(RunCheck, DeterministicAcrossThreads) {
  TrialConfig c;
  c.filtration = FiltrationSpec::dyadic(3, 3);
  c.trials = 12;
  c.seed = 11;
  std::string ref;
  for (int threads : {1, 2, 5}) {
    c.threads = threads;
    const std::string out = render_report(run_checks({"lem_p", "dist_c", "davis_l2"}, c, {1.2, 1.8}), ReportFormat::json);
    if (ref.empty()) ref = out;
    EXPECT_EQ(out, ref) << "threads = " << threads;
  }
}

TEST(Report, EmptyAndSingle) {
  EXPECT_EQ(nlohmann::json::parse(render_report({}, ReportFormat::json)), nlohmann::json::array());
  const std::string csv = render_report({}, ReportFormat::csv);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 1);
  CheckReport r = run_check("weaktype_11", tensor_cfg(3, 2));
  const std::string one = render_report({r}, ReportFormat::csv);
  EXPECT_EQ(std::count(one.begin(), one.end(), '\n'), 2);
  const std::string js = render_report({r}, ReportFormat::json);
  std::vector<CheckReport> back = parse_report_json(js);
  ASSERT_EQ(back.size(), 1u);
  EXPECT_EQ(render_report(back, ReportFormat::json), js);
}

TEST(Registry, Entries) {
  const auto& checks = list_checks();
  EXPECT_EQ(checks.size(), 33u);
  std::set<std::string> names;
  for (const auto& c : checks) {
    EXPECT_FALSE(c.anchor.empty()) << c.name;
    EXPECT_FALSE(c.location.empty()) << c.name;
    EXPECT_FALSE(c.modules.empty()) << c.name;
    names.insert(c.name);
    EXPECT_EQ(find_check(c.name).anchor, c.anchor);
  }
  EXPECT_EQ(names.size(), checks.size());
}

TEST(Suite, AllPassIgnoresReports) {
  CheckReport a, b;
  a.pass = true;
  b.pass = false;
  b.asserting = false;
  EXPECT_TRUE(all_pass({a, b}));
  b.asserting = true;
  EXPECT_FALSE(all_pass({a, b}));
}
