#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <random>
#include <sstream>

#include "ncmart/decompose.hpp"
#include "ncmart/hardy.hpp"
#include "ncmart/io.hpp"
#include "ncmart/verify.hpp"

using namespace ncmart;

namespace {

int exit_code_of(Errc c) {
  switch (c) {
    case Errc::eigen_failure:
    case Errc::generator_failure:
    case Errc::reconstruction_mismatch:
    case Errc::not_disjoint: return 3;
    default: return 2;
  }
}

std::string num(double v) {
  if (std::abs(v) < 5e-13) v = 0.0;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string show(const Matrix& a) {
  const Matrix off = a - Matrix(a.diagonal().asDiagonal());
  std::string s;
  if (off.cwiseAbs().maxCoeff() < 1e-12) {
    s = "diag(";
    for (int i = 0; i < a.rows(); ++i) s += (i ? "," : "") + num(a(i, i));
    return s + ")";
  }
  s = "[";
  for (int i = 0; i < a.rows(); ++i) {
    s += i ? ",[" : "[";
    for (int j = 0; j < a.cols(); ++j) s += (j ? "," : "") + num(a(i, j));
    s += "]";
  }
  return s + "]";
}

void demo_dx4() {
  auto f = Filtration::dyadic(2, 2);
  Matrix x2 = Matrix::Zero(4, 4);
  x2.diagonal() << 3, -1, 0.5, 0.5;
  Martingale x = Martingale::from_final(f, x2);
  auto& o = std::cout;
  o << "DX4: dyadic filtration, d = 4, N = 2, y = x\n";
  o << "x1 = " << show(x.at(1)) << "\n";
  o << "x2 = " << show(x.at(2)) << "\n";
  o << "dx2 = " << show(x.diff(2)) << "\n";
  CuculescuFamily fam = cuculescu_projections(x, 2.0);
  o << "\nCuculescu projections at lambda = 2\n";
  for (int n = 1; n <= 2; ++n) o << "q" << n << " = " << show(fam.q[n]) << "\n";
  const ProjectionGrid G = projection_grid(x);
  o << "\nprojection grid, k_max = " << G.k_max() << "\n";
  for (int i = 0; i <= G.k_max(); ++i)
    for (int n = 1; n <= 2; ++n) o << "e" << i << "," << n << " = " << show(G.e(i, n)) << "\n";
  for (int k = 0; k <= G.k_max(); ++k)
    for (int n = 1; n <= 2; ++n) o << "p" << k << "," << n << " = " << show(G.p(k, n)) << "\n";
  TripleDecomposition t = triple(x, G);
  o << "\ntriple decomposition\n";
  o << "eta2 = " << show(t.eta[2]) << "\n";
  o << "zeta2 = " << show(t.zeta[2]) << "\n";
  o << "xi2 = " << show(t.xi[2]) << "\n";
  GundyDecomposition g = gundy(x, fam, GundyForm::symmetrized);
  o << "\nGundy decomposition at lambda = 2\n";
  o << "dalpha2 = " << show(g.alpha.diff(2)) << "\n";
  o << "dbeta2 = " << show(g.beta.diff(2)) << "\n";
  o << "dgamma2 = " << show(g.gamma.diff(2)) << "\n";
  o << "dupsilon2 = " << show(g.upsilon.diff(2)) << "\n";
  o << "\nsquare functions\n";
  o << "S_c(x)^2 = " << show(square_fn_sq(x, Side::column)) << "\n";
  o << "s_c(x)^2 = " << show(cond_square_fn_sq(x, Side::column)) << "\n";
  double lhs = 0.0;
  for (int n = 1; n <= 2; ++n)
    lhs += normalized_trace(G.e(0, n) * x.diff(n) * G.e(0, n - 1) * x.diff(n) * G.e(0, n));
  o << "\nL2 estimate at k = 0: " << num(lhs) << " <= " << num(2 * lp_norm(x.final(), 1.0)) << "\n";
}

std::vector<double> parse_scalars(const std::string& spec, int n) {
  std::vector<double> v;
  if (spec.rfind("random:", 0) == 0) {
    std::mt19937_64 g(std::stoull(spec.substr(7)));
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int i = 0; i < n; ++i) v.push_back(u(g));
    return v;
  }
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      v.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw Error(Errc::bad_params, "cannot parse symbol '" + item + "'");
    }
  }
  if (v.size() == 1) v.assign(n, v.front());
  if (static_cast<int>(v.size()) != n)
    throw Error(Errc::bad_params, "expected " + std::to_string(n) + " symbols, got " + std::to_string(v.size()));
  return v;
}

MartingalePair build_pair(const Martingale& x, const std::string& spec) {
  if (spec.size() > 5 && spec.substr(spec.size() - 5) == ".json") {
    Json j = read_json_file(spec);
    if (!j.is_array()) throw Error(Errc::io_error, "symbol file must hold an array of matrices");
    std::vector<Matrix> syms;
    for (const auto& m : j) syms.push_back(matrix_from_json(m));
    return transform_pair(x, syms);
  }
  return transform_pair(x, parse_scalars(spec, x.levels()));
}

FiltrationKind kind_from(const std::string& s) {
  if (s == "dyadic") return FiltrationKind::dyadic;
  if (s == "tensor") return FiltrationKind::tensor;
  if (s == "pinching") return FiltrationKind::pinching;
  throw Error(Errc::bad_params, "unknown filtration '" + s + "'");
}

void print_failures(const std::vector<CheckReport>& reports) {
  for (const auto& r : reports) {
    if (!r.asserting || r.pass) continue;
    std::cerr << "FAIL " << r.check << " [" << r.filtration;
    if (!r.param_name.empty()) std::cerr << ", " << r.param_name << "=" << r.param;
    if (!r.variant.empty()) std::cerr << ", " << r.variant;
    std::cerr << "] worst ratio " << r.worst_ratio << " at trial " << r.witness_trial << " (seed "
              << r.witness_seed << ")";
    for (const auto& p : r.parts)
      if (p.asserting && !p.pass) std::cerr << "; " << p.name << " = " << p.worst_ratio << " @ index " << p.witness_index;
    std::cerr << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"noncommutative martingale inequality toolkit"};
  app.require_subcommand(1);

  auto* verify = app.add_subcommand("verify", "run checks and emit a report");
  std::string check, filtration, out, format = "json", phi = "power";
  int levels = 0, depth = 0, trials = 200, threads = 0;
  std::uint64_t seed = 42;
  std::vector<double> ps;
  double B = 1.75, tol = 1e-7, q = 1.5, vlambda = 0.0;
  bool timing = false, no_reports = false;
  verify->add_option("--check", check, "check name or 'all'")->required();
  verify->add_option("--filtration", filtration, "dyadic | tensor | pinching (default: all three for 'all', tensor otherwise)");
  verify->add_option("--levels", levels, "number of levels N");
  verify->add_option("--depth", depth, "dyadic: d = 2^depth");
  verify->add_option("--trials", trials, "trials per check")->check(CLI::PositiveNumber);
  verify->add_option("--seed", seed, "base seed");
  verify->add_option("--p", ps, "exponent; repeat to sweep")->take_all();
  verify->add_option("--B", B, "subordination constant B > 1");
  auto* lam_opt = verify->add_option("--lambda", vlambda, "fixed Gundy cutoff");
  verify->add_option("--q", q, "Orlicz concavity index");
  verify->add_option("--phi", phi, "Orlicz family: power | power_log");
  verify->add_option("--tol", tol, "relative tolerance");
  verify->add_option("--threads", threads, "worker threads (0 = available parallelism)");
  verify->add_flag("--timing", timing, "record wall-clock milliseconds (non-deterministic)");
  verify->add_flag("--no-reports", no_reports, "skip report-only checks in 'all'");
  verify->add_option("--out", out, "output path (stdout if absent)");
  verify->add_option("--format", format, "json | csv")->check(CLI::IsMember({"json", "csv"}));

  auto* decompose = app.add_subcommand("decompose", "decompose a transform of a martingale");
  std::string input, symbols = "1", method, dout;
  double dlambda = 0.0;
  decompose->add_option("--input", input, "martingale JSON file")->required();
  decompose->add_option("--symbols", symbols, "comma list of scalars, random:SEED, or a JSON file of matrices");
  decompose->add_option("--method", method, "gundy | triple | square | davis")
      ->required()
      ->check(CLI::IsMember({"gundy", "triple", "square", "davis"}));
  auto* dlam_opt = decompose->add_option("--lambda", dlambda, "Gundy cutoff");
  decompose->add_option("--out", dout, "output path (stdout if absent)");

  auto* demo = app.add_subcommand("demo", "print a worked example");
  std::string example;
  demo->add_option("--example", example, "example name")->required()->check(CLI::IsMember({"dx4"}));

  auto* list = app.add_subcommand("list", "print the check registry");
  bool list_json = false;
  list->add_flag("--json", list_json, "print name, location and anchor as JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*list && list_json) {
      Json out = Json::array();
      for (const auto& c : list_checks())
        out.push_back({{"check", c.name}, {"location", c.location}, {"anchor", c.anchor}});
      std::cout << out.dump(2) << "\n";
      return 0;
    }
    if (*list) {
      for (const auto& c : list_checks()) {
        std::cout << c.name << "\t" << c.location << "\t" << c.constant_expr
                  << (c.asserting ? "" : "\t(report only)") << "\n";
      }
      return 0;
    }
    if (*demo) {
      demo_dx4();
      return 0;
    }
    if (*decompose) {
      Martingale x = martingale_from_json(read_json_file(input));
      MartingalePair pr = build_pair(x, symbols);
      Json j;
      j["x"] = martingale_to_json(pr.x);
      j["y"] = martingale_to_json(pr.y);
      if (method == "gundy") {
        if (!*dlam_opt || !(dlambda > 0)) throw Error(Errc::bad_params, "gundy needs --lambda > 0");
        j["decomposition"] = decomposition_to_json(pr.y, gundy(pr.x, pr.y, dlambda, GundyForm::symmetrized));
      } else if (method == "triple") {
        j["decomposition"] = decomposition_to_json(pr.y, triple(pr.x, pr.y));
      } else if (method == "square") {
        j["decomposition"] = decomposition_to_json(pr.y, square_pair(pr.x, pr.y));
      } else {
        j["decomposition"] = decomposition_to_json(pr.y, davis_triple(pr.x, pr.y));
      }
      const std::string text = j.dump(2) + "\n";
      if (dout.empty()) std::cout << text;
      else write_text_file(dout, text);
      return 0;
    }

    // verify
    if (!(B > 1)) throw Error(Errc::bad_params, "--B must exceed 1");
    if (*lam_opt && !(vlambda > 0)) throw Error(Errc::bad_params, "--lambda must be positive");
    const ReportFormat fmt = format == "csv" ? ReportFormat::csv : ReportFormat::json;
    auto spec_of = [&](FiltrationKind k) {
      FiltrationSpec s = k == FiltrationKind::tensor ? FiltrationSpec::tensor()
                         : k == FiltrationKind::dyadic ? FiltrationSpec::dyadic()
                                                       : FiltrationSpec::pinching();
      if (levels > 0) s.levels = levels;
      if (depth > 0) s.depth = depth;
      if (k == FiltrationKind::dyadic && levels > 0 && depth == 0) s.depth = std::max(levels, 4);
      return s;
    };
    std::vector<CheckReport> reports;
    if (check == "all") {
      SuiteConfig sc;
      sc.seed = seed;
      sc.trials = trials;
      sc.threads = threads;
      sc.timing = timing;
      sc.tol = tol;
      sc.reports = !no_reports;
      if (!filtration.empty()) sc.filtrations = {spec_of(kind_from(filtration))};
      else if (levels > 0 || depth > 0)
        sc.filtrations = {spec_of(FiltrationKind::tensor), spec_of(FiltrationKind::dyadic),
                          spec_of(FiltrationKind::pinching)};
      if (!ps.empty()) sc.p_grid = sc.wang_grid = ps;
      reports = run_suite(sc);
    } else {
      find_check(check);
      TrialConfig cfg;
      cfg.filtration = spec_of(filtration.empty() ? FiltrationKind::tensor : kind_from(filtration));
      cfg.trials = trials;
      cfg.seed = seed;
      cfg.B = B;
      cfg.q = q;
      cfg.phi = phi == "power_log" ? OrliczKind::power_log
                : phi == "power"   ? OrliczKind::power
                                   : throw Error(Errc::bad_params, "unknown Orlicz family '" + phi + "'");
      if (*lam_opt) cfg.lambda = vlambda;
      cfg.tol = tol;
      cfg.threads = threads;
      cfg.timing = timing;
      reports = run_checks({check}, cfg, ps);
    }
    emit_report(reports, fmt, out);
    if (!all_pass(reports)) {
      print_failures(reports);
      return 1;
    }
    return 0;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_of(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
