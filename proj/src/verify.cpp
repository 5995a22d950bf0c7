#include "ncmart/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <thread>

#include "checks.hpp"
#include "ncmart/io.hpp"

namespace ncmart {

using detail::CheckEntry;
using detail::JobParams;
using detail::Sink;
using detail::TrialContext;

// ---------------------------------------------------------------- filtrations

FiltrationPtr FiltrationSpec::build() const {
  switch (kind) {
    case FiltrationKind::tensor: return Filtration::tensor(levels);
    case FiltrationKind::dyadic: return Filtration::dyadic(depth > 0 ? depth : std::max(levels, 4), levels);
    case FiltrationKind::pinching: {
      if (!blocks.empty()) return Filtration::pinching(blocks);
      const std::vector<std::vector<int>> chain{
          std::vector<int>(12, 1), std::vector<int>(6, 2), std::vector<int>(3, 4), std::vector<int>{12}};
      if (levels < 1 || levels > static_cast<int>(chain.size()))
        throw Error(Errc::bad_params, "default pinching chain has 1 to 4 levels");
      return Filtration::pinching({chain.end() - levels, chain.end()});
    }
    case FiltrationKind::generic: break;
  }
  throw Error(Errc::bad_params, "generic filtrations cannot be built from a spec");
}

std::string FiltrationSpec::label() const {
  std::ostringstream os;
  os << kind_name(kind) << "(";
  if (kind == FiltrationKind::dyadic) os << "L=" << (depth > 0 ? depth : std::max(levels, 4)) << ",";
  os << "N=" << levels << ")";
  return os.str();
}

FiltrationSpec FiltrationSpec::tensor(int levels) { return {FiltrationKind::tensor, levels, 0, {}}; }
FiltrationSpec FiltrationSpec::dyadic(int depth, int levels) { return {FiltrationKind::dyadic, levels, depth, {}}; }
FiltrationSpec FiltrationSpec::pinching(int levels) { return {FiltrationKind::pinching, levels, 0, {}}; }

// ---------------------------------------------------------------- registry view

const std::vector<CheckInfo>& list_checks() {
  static const std::vector<CheckInfo> infos = [] {
    std::vector<CheckInfo> v;
    for (const auto& e : detail::registry()) v.push_back(e.info);
    return v;
  }();
  return infos;
}

const CheckInfo& find_check(const std::string& name) { return detail::entry(name).info; }

// ---------------------------------------------------------------- runner

namespace {

struct Job {
  const CheckEntry* entry;
  JobParams jp;
  std::string param_name;
  double param = 0.0;
  std::string variant;
};

struct Cell {
  Sink sink;
  std::exception_ptr error;
  double ms = 0.0;
};

Job make_job(const CheckEntry& e, const JobParams& jp) {
  Job j{&e, jp, e.info.param, 0.0, ""};
  if (e.info.param == "p") j.param = jp.p;
  if (e.info.param == "q") {
    j.param = jp.q;
    j.variant = orlicz_kind_name(jp.phi);
  }
  if (e.info.param == "B") j.param = jp.B;
  if (e.info.name == "gundy_bounds" && jp.lambda) {
    std::ostringstream os;
    os << "lambda=" << *jp.lambda;
    j.variant = os.str();
  }
  return j;
}

JobParams params_of(const TrialConfig& cfg) {
  JobParams jp;
  jp.p = cfg.p;
  jp.q = cfg.q;
  jp.phi = cfg.phi;
  jp.B = cfg.B;
  jp.lambda = cfg.lambda;
  return jp;
}

void require_filtration(const CheckEntry& e, const FiltrationSpec& spec) {
  if (e.dyadic_only && spec.kind != FiltrationKind::dyadic)
    throw Error(Errc::bad_params, "check '" + e.info.name + "' needs the dyadic filtration");
}

[[noreturn]] void rethrow_with_witness(std::exception_ptr ep, const std::string& check, int trial,
                                       std::uint64_t seed) {
  const std::string where = "check " + check + ", trial " + std::to_string(trial) + " (seed " +
                            std::to_string(seed) + "): ";
  try {
    std::rethrow_exception(ep);
  } catch (const Error& e) {
    std::string msg = e.what();
    const std::string prefix = std::string(errc_name(e.code())) + ": ";
    if (msg.rfind(prefix, 0) == 0) msg = msg.substr(prefix.size());
    throw Error(e.code(), where + msg);
  } catch (const std::exception& e) {
    throw Error(Errc::eigen_failure, where + e.what());
  }
}

CheckReport merge(const Job& job, const std::vector<std::vector<Cell>>& cells, std::size_t j,
                  const FiltrationSpec& spec, const TrialConfig& cfg) {
  const int T = static_cast<int>(cells.size());
  for (int t = 0; t < T; ++t)
    if (cells[t][j].error)
      rethrow_with_witness(cells[t][j].error, job.entry->info.name, t, detail::mix(cfg.seed, t));

  CheckReport r;
  r.check = job.entry->info.name;
  r.filtration = spec.label();
  r.param_name = job.param_name;
  r.param = job.param;
  r.variant = job.variant;
  auto [expr, value] = detail::constant_of(*job.entry, job.jp);
  r.constant_expr = expr;
  r.constant_value = value;
  r.asserting = detail::asserting_for(*job.entry, job.jp);
  r.trials = T;

  double ms = 0.0;
  std::vector<bool> seen;
  for (int t = 0; t < T; ++t) {
    const Cell& c = cells[t][j];
    ms += c.ms;
    r.unstable = r.unstable || c.sink.unstable;
    r.truncation_budget = std::max(r.truncation_budget, c.sink.budget);
    for (const auto& o : c.sink.obs) {
      auto it = std::find_if(r.parts.begin(), r.parts.end(), [&](const CheckPart& p) { return p.name == o.part; });
      if (it == r.parts.end()) {
        CheckPart p;
        p.name = o.part;
        p.asserting = r.asserting && o.asserting;
        p.worst_ratio = o.ratio;
        p.witness_trial = t;
        p.witness_seed = detail::mix(cfg.seed, t);
        p.witness_index = o.index;
        r.parts.push_back(p);
      } else if (o.ratio > it->worst_ratio) {
        it->worst_ratio = o.ratio;
        it->witness_trial = t;
        it->witness_seed = detail::mix(cfg.seed, t);
        it->witness_index = o.index;
      }
    }
  }
  if (cfg.timing) r.wall_ms = ms;

  const bool any_asserting =
      std::any_of(r.parts.begin(), r.parts.end(), [](const CheckPart& p) { return p.asserting; });
  r.pass = true;
  bool first = true;
  for (auto& p : r.parts) {
    p.pass = p.worst_ratio <= 1.0 + cfg.tol;
    if (any_asserting && !p.asserting) continue;
    r.pass = r.pass && p.pass;
    if (first || p.worst_ratio > r.worst_ratio) {
      r.worst_ratio = p.worst_ratio;
      r.witness_trial = p.witness_trial;
      r.witness_seed = p.witness_seed;
      first = false;
    }
  }
  return r;
}

std::vector<CheckReport> run_jobs(const std::vector<Job>& jobs, const FiltrationSpec& spec,
                                  const TrialConfig& cfg) {
  if (cfg.trials < 1) throw Error(Errc::bad_params, "need at least one trial");
  if (!(cfg.tol >= 0)) throw Error(Errc::bad_params, "tolerance must be non-negative");
  for (const auto& j : jobs) require_filtration(*j.entry, spec);
  const FiltrationPtr f = spec.build();
  const int T = cfg.trials;
  std::vector<std::vector<Cell>> cells(T, std::vector<Cell>(jobs.size()));

  int threads = cfg.threads > 0 ? cfg.threads : static_cast<int>(std::thread::hardware_concurrency());
  threads = std::clamp(threads, 1, T);

  auto work = [&](int w) {
    using clock = std::chrono::steady_clock;
    for (int t = w; t < T; t += threads) {
      std::optional<TrialContext> ctx;
      try {
        ctx.emplace(f, cfg.seed, t);
      } catch (...) {
        for (auto& c : cells[t]) c.error = std::current_exception();
        continue;
      }
      for (std::size_t j = 0; j < jobs.size(); ++j) {
        Cell& c = cells[t][j];
        const auto t0 = clock::now();
        try {
          jobs[j].entry->eval(*ctx, jobs[j].jp, c.sink);
          if (ctx->has_grid()) c.sink.budget = ctx->grid().truncation_budget();
        } catch (...) {
          c.error = std::current_exception();
        }
        c.ms = std::chrono::duration<double, std::milli>(clock::now() - t0).count();
      }
    }
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < threads; ++w) pool.emplace_back(work, w);
    for (auto& th : pool) th.join();
  }

  std::vector<CheckReport> out;
  for (std::size_t j = 0; j < jobs.size(); ++j) out.push_back(merge(jobs[j], cells, j, spec, cfg));
  return out;
}

}  // namespace

CheckReport run_check(const std::string& name, const TrialConfig& cfg) {
  const CheckEntry& e = detail::entry(name);
  return run_jobs({make_job(e, params_of(cfg))}, cfg.filtration, cfg).front();
}

std::vector<CheckReport> run_checks(const std::vector<std::string>& names, const TrialConfig& cfg,
                                    const std::vector<double>& ps) {
  std::vector<Job> jobs;
  for (const auto& n : names) {
    const CheckEntry& e = detail::entry(n);
    JobParams jp = params_of(cfg);
    if (e.info.param == "p" && !ps.empty()) {
      for (double p : ps) {
        jp.p = p;
        jobs.push_back(make_job(e, jp));
      }
    } else {
      jobs.push_back(make_job(e, jp));
    }
  }
  return run_jobs(jobs, cfg.filtration, cfg);
}

std::vector<CheckReport> run_suite(const SuiteConfig& sc) {
  std::vector<double> hh_grid = sc.p_grid;
  hh_grid.insert(hh_grid.end(), sc.wang_grid.begin(), sc.wang_grid.end());
  std::sort(hh_grid.begin(), hh_grid.end());
  hh_grid.erase(std::unique(hh_grid.begin(), hh_grid.end()), hh_grid.end());

  std::vector<CheckReport> out;
  for (const auto& spec : sc.filtrations) {
    TrialConfig cfg;
    cfg.filtration = spec;
    cfg.trials = sc.trials;
    cfg.seed = sc.seed;
    cfg.threads = sc.threads;
    cfg.timing = sc.timing;
    cfg.tol = sc.tol;
    std::vector<Job> jobs;
    for (const auto& e : detail::registry()) {
      if (!sc.reports && !e.info.asserting) continue;
      if (e.dyadic_only && spec.kind != FiltrationKind::dyadic) continue;
      JobParams jp = params_of(cfg);
      if (e.info.param == "p") {
        const auto& grid = e.info.name == "wang" ? sc.wang_grid : e.info.name == "hh" ? hh_grid : sc.p_grid;
        for (double p : grid) {
          jp.p = p;
          jobs.push_back(make_job(e, jp));
        }
      } else if (e.info.param == "q") {
        for (double q : sc.q_grid) {
          jp.q = q;
          jp.phi = OrliczKind::power;
          jobs.push_back(make_job(e, jp));
        }
        if (sc.reports) {
          jp.q = 1.5;
          jp.phi = OrliczKind::power_log;
          jobs.push_back(make_job(e, jp));
        }
      } else {
        jobs.push_back(make_job(e, jp));
      }
    }
    auto part = run_jobs(jobs, spec, cfg);
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

bool all_pass(const std::vector<CheckReport>& reports) {
  return std::all_of(reports.begin(), reports.end(),
                     [](const CheckReport& r) { return !r.asserting || r.pass; });
}

// ---------------------------------------------------------------- rendering

namespace {

using OJson = nlohmann::ordered_json;

OJson num(double v) { return std::isfinite(v) ? OJson(v) : OJson(nullptr); }
double num_of(const nlohmann::json& j) { return j.is_null() ? kInf : j.get<double>(); }

OJson to_json(const CheckReport& r) {
  OJson j;
  j["check"] = r.check;
  j["filtration"] = r.filtration;
  j["param_name"] = r.param_name;
  j["param"] = r.param;
  j["variant"] = r.variant;
  j["constant_expr"] = r.constant_expr;
  j["constant_value"] = num(r.constant_value);
  j["worst_ratio"] = num(r.worst_ratio);
  j["witness_seed"] = r.witness_seed;
  j["witness_trial"] = r.witness_trial;
  j["pass"] = r.pass;
  j["asserting"] = r.asserting;
  j["trials"] = r.trials;
  j["truncation_budget"] = r.truncation_budget;
  j["unstable"] = r.unstable;
  j["wall_ms"] = r.wall_ms ? OJson(*r.wall_ms) : OJson(nullptr);
  OJson parts = OJson::array();
  for (const auto& p : r.parts) {
    OJson pj;
    pj["name"] = p.name;
    pj["asserting"] = p.asserting;
    pj["worst_ratio"] = num(p.worst_ratio);
    pj["witness_trial"] = p.witness_trial;
    pj["witness_seed"] = p.witness_seed;
    pj["witness_index"] = p.witness_index;
    pj["pass"] = p.pass;
    parts.push_back(pj);
  }
  j["parts"] = parts;
  return j;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string o = "\"";
  for (char c : s) {
    if (c == '"') o += '"';
    o += c;
  }
  return o + "\"";
}

std::string g17(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string render_report(const std::vector<CheckReport>& reports, ReportFormat format) {
  if (format == ReportFormat::json) {
    OJson arr = OJson::array();
    for (const auto& r : reports) arr.push_back(to_json(r));
    return arr.dump(2) + "\n";
  }
  std::ostringstream os;
  os << "check,constant_expr,constant_value,worst_ratio,witness_seed,witness_trial,pass,trials,wall_ms,"
        "filtration,param_name,param,variant,asserting,truncation_budget,unstable\n";
  for (const auto& r : reports) {
    os << csv_field(r.check) << ',' << csv_field(r.constant_expr) << ',' << g17(r.constant_value) << ','
       << g17(r.worst_ratio) << ',' << r.witness_seed << ',' << r.witness_trial << ','
       << (r.pass ? "true" : "false") << ',' << r.trials << ',' << (r.wall_ms ? g17(*r.wall_ms) : "") << ','
       << csv_field(r.filtration) << ',' << csv_field(r.param_name) << ',' << g17(r.param) << ','
       << csv_field(r.variant) << ',' << (r.asserting ? "true" : "false") << ',' << g17(r.truncation_budget)
       << ',' << (r.unstable ? "true" : "false") << '\n';
  }
  return os.str();
}

void emit_report(const std::vector<CheckReport>& reports, ReportFormat format, const std::string& path) {
  const std::string text = render_report(reports, format);
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  write_text_file(path, text);
}

std::vector<CheckReport> parse_report_json(const std::string& text) {
  std::vector<CheckReport> out;
  try {
    const Json arr = Json::parse(text);
    if (!arr.is_array()) throw Error(Errc::io_error, "report JSON must be an array");
    for (const auto& j : arr) {
      CheckReport r;
      r.check = j.at("check").get<std::string>();
      r.filtration = j.at("filtration").get<std::string>();
      r.param_name = j.at("param_name").get<std::string>();
      r.param = j.at("param").get<double>();
      r.variant = j.at("variant").get<std::string>();
      r.constant_expr = j.at("constant_expr").get<std::string>();
      r.constant_value = num_of(j.at("constant_value"));
      r.worst_ratio = num_of(j.at("worst_ratio"));
      r.witness_seed = j.at("witness_seed").get<std::uint64_t>();
      r.witness_trial = j.at("witness_trial").get<int>();
      r.pass = j.at("pass").get<bool>();
      r.asserting = j.at("asserting").get<bool>();
      r.trials = j.at("trials").get<int>();
      r.truncation_budget = j.at("truncation_budget").get<double>();
      r.unstable = j.at("unstable").get<bool>();
      if (!j.at("wall_ms").is_null()) r.wall_ms = j.at("wall_ms").get<double>();
      for (const auto& pj : j.at("parts")) {
        CheckPart p;
        p.name = pj.at("name").get<std::string>();
        p.asserting = pj.at("asserting").get<bool>();
        p.worst_ratio = num_of(pj.at("worst_ratio"));
        p.witness_trial = pj.at("witness_trial").get<int>();
        p.witness_seed = pj.at("witness_seed").get<std::uint64_t>();
        p.witness_index = pj.at("witness_index").get<int>();
        p.pass = pj.at("pass").get<bool>();
        r.parts.push_back(p);
      }
      out.push_back(std::move(r));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::io_error, std::string("malformed report JSON: ") + e.what());
  }
  return out;
}

}  // namespace ncmart
