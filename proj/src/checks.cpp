#include "checks.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ncmart/hardy.hpp"
#include "ncmart/orlicz.hpp"

namespace ncmart::detail {

// ---------------------------------------------------------------- seeding

std::uint64_t splitmix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t mix(std::uint64_t a, std::uint64_t b) { return splitmix(splitmix(a) ^ (b + 0x632be59bd9b4e019ULL)); }

std::uint64_t hash_name(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

void Sink::add(const std::string& part, double ratio, int index, bool asserting) {
  if (std::isnan(ratio)) ratio = kInf;
  for (auto& o : obs)
    if (o.part == part) {
      if (ratio > o.ratio) {
        o.ratio = ratio;
        o.index = index;
      }
      return;
    }
  obs.push_back({part, asserting, ratio, index});
}

// ---------------------------------------------------------------- trial state

TrialContext::TrialContext(FiltrationPtr f, std::uint64_t base_seed, int trial)
    : f_(std::move(f)), trial_(trial), seed_(mix(base_seed, static_cast<std::uint64_t>(trial))) {
  std::mt19937_64 g(seed_);
  std::uniform_real_distribution<double> expo(-4.0, 4.0), unit(-1.0, 1.0), coin(0.0, 1.0);
  const Law law = trial % 2 == 0 ? Law::gaussian : Law::uniform;
  const double scale = std::exp2(expo(g));
  x_ = random_martingale(f_, splitmix(seed_ ^ 0x5eedULL), law).scaled(scale);
  std::vector<double> eps;
  for (int n = 1; n <= x_.levels(); ++n) {
    if (coin(g) < 0.5)
      eps.push_back(coin(g) < 0.5 ? 1.0 : -1.0);
    else
      eps.push_back(unit(g));
  }
  y_ = transform_pair(x_, eps).y;
}

std::mt19937_64 TrialContext::rng(const std::string& check) const {
  return std::mt19937_64(mix(seed_, hash_name(check)));
}

const ProjectionGrid& TrialContext::grid() {
  if (!grid_) grid_ = projection_grid(x_);
  return *grid_;
}

const TripleDecomposition& TrialContext::tri() {
  if (!tri_) tri_ = triple(y_, grid());
  return *tri_;
}

const DavisTriple& TrialContext::davis() {
  if (!davis_) davis_ = davis_triple(y_, tri());
  return *davis_;
}

const SquareDecomposition& TrialContext::square() {
  if (!square_) square_ = square_pair(y_, grid());
  return *square_;
}

const Matrix& TrialContext::sigma_zeta() {
  if (!sz_) sz_ = sigma_c(tri().zeta, Side::column);
  return *sz_;
}

const Matrix& TrialContext::sigma_xi() {
  if (!sx_) sx_ = sigma_c(tri().xi, Side::row);
  return *sx_;
}

const Matrix& TrialContext::abs_xN() {
  if (!absx_) absx_ = abs(x_.final());
  return *absx_;
}

double TrialContext::x_l1() {
  if (!x1_) x1_ = lp_norm(x_.final(), 1.0);
  return *x1_;
}

double TrialContext::tail_mass(int k) {
  const Matrix& e = grid().e(k, x_.levels());
  return normalized_trace((identity(x_.dim()) - e) * abs_xN());
}

double TrialContext::compressed_l2sq(int k) {
  const Matrix& e = grid().e(k, x_.levels());
  Matrix c = e * x_.final() * e;
  return c.squaredNorm() / c.rows();
}

// ---------------------------------------------------------------- helpers

namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;

double ratio(double lhs, double rhs, double slack = 1e-12) {
  return std::max(0.0, lhs - slack) / std::max(rhs, 1e-12);
}

double tau(const Matrix& a) { return normalized_trace(a); }
double l2sq(const Matrix& a) { return a.squaredNorm() / a.rows(); }
double pow2(int k) { return std::ldexp(1.0, k); }
double max_abs(const Matrix& a) { return a.size() ? a.cwiseAbs().maxCoeff() : 0.0; }
double neg(double margin) { return std::max(0.0, -margin); }
double lpp(const Matrix& a, double p) { return std::pow(lp_norm(a, p), p); }
double scale_of(const Martingale& m) { return std::max(1.0, max_abs(m.final())); }

Matrix gaussian_matrix(int d, std::mt19937_64& g) {
  std::normal_distribution<double> nd;
  Matrix a(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) a(i, j) = nd(g);
  return a;
}

/// q^{(2^k)}_0..N from the grid; above k_max every projection is 1.
std::vector<Matrix> q_family(const ProjectionGrid& G, int k) {
  std::vector<Matrix> q;
  for (int n = 0; n <= G.levels(); ++n)
    q.push_back(k > G.k_max() ? identity(G.dim()) : G.q(k, n));
  return q;
}

double reconstruction_error(const Martingale& y, const std::vector<const Martingale*>& pieces) {
  double r = 0.0;
  for (int n = 1; n <= y.levels(); ++n) {
    Matrix s = -y.diff(n);
    for (const auto* p : pieces) s += p->diff(n);
    r = std::max(r, max_abs(s));
  }
  return r;
}

double eta_distribution(const TripleDecomposition& t, double lambda) {
  double acc = 0.0;
  for (const auto& a : t.eta.terms) acc += distribution(a, lambda);
  return acc;
}

// ---------------------------------------------------------------- constants

double c_weak(double B) { return 2 + 2 * B * B + 4 * B / (B - 1); }
double c_lemp(double p) { return std::exp2((p - 1) * (p - 1)) / std::pow(std::exp2(p - 1) - 1, p); }
double c_last(double p) {
  return std::exp2(p * p + 1) / ((1 - std::exp2(p - 2)) * std::pow(std::exp2(p - 1) - 1, p));
}
double k_zeta(double p) {
  return std::exp2(p * p) / std::pow(std::exp2(p - 1) - 1, p) * (8 + 6 / (1 - std::exp2(p - 2)));
}
double k_eta(double p) {
  return std::exp2(p * p + p) / std::pow(std::exp2(p - 1) - 1, p) * (77 + 24 / (1 - std::exp2(p - 2)));
}
double k_main_s() { return 10 + 160 * kSqrt2; }
double k_square(double p) { return (std::exp2(p) - 1) * (4 * c_last(p) + (160 * kSqrt2 + 26) * c_lemp(p)); }
double c_strong(double p) {
  const double r = 1 - std::exp2(p - 2);
  return std::exp2(p + 1) / (std::exp2(p - 1) - 1) *
         (std::pow(8 + 6 / r, 1 / p) + std::pow(77 + 24 / r, 1 / p));
}
double c_wang(double p) { return std::sqrt(2 / p); }
double c_hh(double p) { return p < 1 ? std::pow(3.0, (1 - p) / p) * std::sqrt(2 / p) : std::sqrt(2 / p); }

// ---------------------------------------------------------------- checks

void quasi_triangle(TrialContext& c, const JobParams&, Sink& s) {
  auto g = c.rng("quasi_triangle");
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const int d = c.x().dim();
  auto pick = [&](const Matrix& a) {
    SingularProfile sv = singular_values(a);
    const int j = std::min(d - 1, static_cast<int>(u(g) * d));
    double t = sv.values(j);
    if (u(g) < 0.5) t *= 0.5 + u(g);
    return std::max(t, 1e-9);
  };
  auto test = [&](const Matrix& a, const Matrix& b, double t, double r, int idx) {
    const double lhs = distribution(Matrix(a + b), t + r);
    const double rhs = distribution(a, t) + distribution(b, r);
    s.add("quasi_triangle", ratio(lhs, rhs), idx);
  };
  for (int r = 0; r < 4; ++r) {
    Matrix a = gaussian_matrix(d, g) * std::exp2(4 * u(g) - 2);
    Matrix b = gaussian_matrix(d, g) * std::exp2(4 * u(g) - 2);
    test(a, b, pick(a), pick(b), r);
  }
  const Matrix& a = c.x().final();
  const Matrix& b = c.y().final();
  test(a, b, op_norm(a) / 2 + 1e-9, op_norm(b) / 3 + 1e-9, 4);
}

void cuculescu_props(TrialContext& c, const JobParams&, Sink& s) {
  const auto& G = c.grid();
  const auto& x = c.x();
  const Filtration& f = x.filtration();
  const int N = x.levels();
  const Matrix id = identity(x.dim());
  const double x1 = c.x_l1();
  for (int k = std::max(G.lowest(), -4); k <= G.k_max(); ++k) {
    const double lam = pow2(k);
    for (int n = 1; n <= N; ++n) {
      const Matrix& qn = G.q(k, n);
      const Matrix& qp = G.q(k, n - 1);
      s.add("adapted", max_abs(f.condexp(n, qn) - qn) / 1e-10, n);
      s.add("decreasing", neg(min_eigenvalue(qp - qn)) / 1e-9, n);
      Matrix m = qp * x.at(n) * qp;
      s.add("commutation", op_norm(qn * m - m * qn) / (1e-8 * (1 + op_norm(x.at(n)))), n);
      s.add("cutoff", ratio(op_norm(qn * x.at(n) * qn), lam, 1e-8), k);
    }
    const Matrix& qN = G.q(k, N);
    const double lhs = 1 - tau(qN);
    const double mid = tau((id - qN) * c.abs_xN()) / lam;
    s.add("tail", ratio(lhs, mid, 1e-9), k);
    s.add("tail_l1", ratio(mid, x1 / lam, 1e-9), k);
  }
  // lambda = 2^{k_max + 1}: the family is trivial.
  CuculescuFamily top = cuculescu_projections(x, pow2(G.k_max() + 1));
  double dev = 0.0;
  for (const auto& q : top.q) dev = std::max(dev, max_abs(q - id));
  s.add("trivial_above_norm", dev / 1e-10);
}

void grid_props(TrialContext& c, const JobParams&, Sink& s) {
  const auto& G = c.grid();
  const int N = G.levels();
  const int K = G.k_max();
  const Matrix id = identity(G.dim());
  for (int n = 1; n <= N; ++n) {
    for (int i = G.lowest(); i <= K; ++i) {
      s.add("monotone_i", neg(min_eigenvalue(G.e(i, n) - G.e(i - 1, n))) / 1e-8, n);
      s.add("monotone_n", neg(min_eigenvalue(G.e(i, n - 1) - G.e(i, n))) / 1e-8, n);
    }
    Matrix acc = Matrix::Zero(G.dim(), G.dim());
    for (int m = 0; m <= K; ++m) {
      const Matrix& p = G.p(m, n);
      acc += p;
      s.add("partial_sums", max_abs(acc - G.e(m, n)) / 1e-9, m);
      s.add("idempotent", max_abs(p * p - p) / 1e-9, m);
      for (int j = m + 1; j <= K; ++j) s.add("disjoint", op_norm(p * G.p(j, n)) / 1e-8, n);
    }
    s.add("completeness", max_abs(acc - id) / 1e-9, n);
    for (int i = 1; i <= K; ++i) {
      Matrix D = G.p(i, n) - G.p(i, n - 1) * G.p(i, n);
      Matrix l = support(D, SupportSide::left);
      s.add("left_support", neg(min_eigenvalue(G.e(i - 1, n - 1) - G.e(i - 1, n) - l)) / 1e-8, i);
    }
    s.add("stabilization", max_abs(G.q(K, n) - id) / 1e-9, n);
  }
}

void e_estimate(TrialContext& c, const JobParams&, Sink& s) {
  const auto& G = c.grid();
  for (int k = 0; k <= G.k_max(); ++k) {
    const double lhs = 1 - tau(G.e(k, G.levels()));
    s.add("meet_tail", ratio(lhs, std::ldexp(2.0, -k) * c.tail_mass(k), 1e-9), k);
  }
}

double l2_lhs(TrialContext& c, int k) {
  const auto& G = c.grid();
  double acc = 0.0;
  for (int n = 1; n <= G.levels(); ++n) {
    const Matrix& dx = c.x().diff(n);
    const Matrix& en = G.e(k, n);
    acc += tau(en * dx * G.e(k, n - 1) * dx * en);
  }
  return acc;
}

void l2norm_i(TrialContext& c, const JobParams&, Sink& s) {
  const auto& G = c.grid();
  const auto& x = c.x();
  const int N = x.levels();
  const Matrix id = identity(x.dim());
  for (int k = std::max(G.lowest(), -6); k <= G.k_max() + 1; ++k) {
    const double lam = pow2(k);
    auto q = q_family(G, k);
    double lhs = 0.0;
    for (int n = 1; n <= N; ++n) lhs += tau(q[n] * x.diff(n) * q[n - 1] * x.diff(n) * q[n]);
    const double rhs = l2sq(q[N] * x.final() * q[N]) + 2 * lam * tau((id - q[N]) * c.abs_xN());
    s.add("cuculescu", ratio(lhs, rhs, 1e-8), k);
  }
}

void l2norm_ii(TrialContext& c, const JobParams&, Sink& s) {
  for (int k = 0; k <= c.grid().k_max(); ++k)
    s.add("meet", ratio(l2_lhs(c, k), pow2(k + 1) * c.x_l1(), 1e-8), k);
}

void l2norm_iii(TrialContext& c, const JobParams&, Sink& s) {
  for (int k = 0; k <= c.grid().k_max(); ++k) {
    const double rhs = c.compressed_l2sq(k) + 6 * pow2(k) * c.tail_mass(k);
    s.add("meet_split", ratio(l2_lhs(c, k), rhs, 1e-8), k);
  }
}

void lem_p(TrialContext& c, const JobParams& jp, Sink& s) {
  const double p = jp.p;
  double lhs = 0.0;
  for (int j = 0; j <= c.grid().k_max(); ++j) lhs += std::exp2((p - 1) * j) * c.tail_mass(j);
  s.add("weighted_tails", ratio(lhs, c_lemp(p) * lpp(c.x().final(), p)));
}

void lem_last(TrialContext& c, const JobParams& jp, Sink& s) {
  const double p = jp.p;
  const auto& G = c.grid();
  const int N = G.levels();
  const int K = G.k_max();
  for (int k = 0; k <= K; ++k) {
    double rhs = G.truncation_budget();
    for (int j = G.lowest(); j <= k; ++j) rhs += 2 * std::ldexp(1.0, 2 * j) * tau(G.e(j, N) - G.e(j - 1, N));
    s.add("est1", ratio(c.compressed_l2sq(k), rhs), k);
  }
  double lhs = 0.0;
  for (int k = 0; k <= K; ++k) lhs += std::exp2((p - 2) * k) * c.compressed_l2sq(k);
  // e_{k,N} = 1 for k > k_max: the remaining geometric tail in closed form.
  lhs += l2sq(c.x().final()) * std::exp2((p - 2) * (K + 1)) / (1 - std::exp2(p - 2));
  s.add("weighted_sum", ratio(lhs, c_last(p) * lpp(c.x().final(), p)));
}

void gundy_bounds(TrialContext& c, const JobParams& jp, Sink& s) {
  const auto& x = c.x();
  const auto& y = c.y();
  const int N = y.levels();
  const double x1 = c.x_l1();
  const double sc = scale_of(y);
  auto run = [&](const CuculescuFamily& fam, int idx) {
    const double lam = fam.lambda;
    for (GundyForm form : {GundyForm::symmetrized, GundyForm::literal}) {
      const std::string sfx = form == GundyForm::literal ? "_literal" : "";
      GundyDecomposition g = gundy(y, fam, form);
      s.add("alpha" + sfx, ratio(l2sq(g.alpha.final()), 2 * lam * x1), idx);
      double b = 0.0;
      std::vector<Matrix> sg, su;
      for (int n = 1; n <= N; ++n) {
        b += lp_norm(g.beta.diff(n), 1.0);
        sg.push_back(support(g.gamma.diff(n), SupportSide::right));
        su.push_back(support(g.upsilon.diff(n), SupportSide::left));
      }
      s.add("beta" + sfx, ratio(b, 4 * x1), idx);
      s.add("gamma" + sfx, ratio(lam * tau(join(sg)), x1), idx);
      s.add("upsilon" + sfx, ratio(lam * tau(join(su)), x1), idx);
      s.add("reconstruction" + sfx,
            reconstruction_error(y, {&g.alpha, &g.beta, &g.gamma, &g.upsilon}) / (1e-9 * sc), idx);
      double mres = 0.0;
      for (const auto* m : {&g.alpha, &g.beta, &g.gamma, &g.upsilon})
        mres = std::max(mres, m->martingale_residual());
      s.add("martingale" + sfx, mres / (1e-9 * sc), idx);
      if (form == GundyForm::symmetrized) {
        double asym = 0.0;
        for (int n = 1; n <= N; ++n)
          asym = std::max(asym, max_abs(g.gamma.diff(n).transpose() - g.upsilon.diff(n)));
        s.add("gamma_adjoint", asym / (1e-10 * sc), idx);
      }
    }
  };
  if (jp.lambda) {
    run(cuculescu_projections(x, *jp.lambda), 0);
    return;
  }
  const auto& G = c.grid();
  for (int k = std::max(G.lowest(), -3); k <= G.k_max() + 1; ++k) {
    CuculescuFamily fam{pow2(k), q_family(G, k)};
    run(fam, k);
  }
}

void weaktype_11(TrialContext& c, const JobParams& jp, Sink& s) {
  const double cb = c_weak(jp.B);
  const double x1 = c.x_l1();
  for (int l = -10; l <= c.grid().k_max() + 2; ++l) {
    const double lam = pow2(l);
    s.add("weak_type", ratio(lam * distribution(c.y().final(), lam), cb * x1), l);
  }
}

void transfer(TrialContext& c, const JobParams&, Sink& s) {
  const auto& G = c.grid();
  const auto& t = c.tri();
  const Filtration& f = c.x().filtration();
  for (int k = 0; k <= G.k_max(); ++k)
    for (int n = 2; n <= G.levels(); ++n) {
      const Matrix& ep = G.e(k, n - 1);
      const Matrix& en = G.e(k, n);
      const Matrix& dx = c.x().diff(n);
      const double rhs = tau(en * dx * ep * dx * en);
      const Matrix& z = t.zeta[n];
      const Matrix& xi = t.xi[n];
      s.add("zeta", ratio(tau(ep * f.condexp(n - 1, z.transpose() * z) * ep), rhs), k);
      s.add("xi", ratio(tau(ep * f.condexp(n - 1, xi * xi.transpose()) * ep), rhs), k);
    }
}

void dist_c(TrialContext& c, const JobParams&, Sink& s) {
  for (int k = 0; k <= c.grid().k_max(); ++k) {
    const double lam = pow2(k);
    const double rhs = std::ldexp(c.compressed_l2sq(k), -2 * k) + 8 * std::ldexp(c.tail_mass(k), -k);
    s.add("column", ratio(distribution(c.sigma_zeta(), lam), rhs), k);
    s.add("row", ratio(distribution(c.sigma_xi(), lam), rhs), k);
  }
}

void dist_d(TrialContext& c, const JobParams&, Sink& s) {
  const auto& G = c.grid();
  const auto& t = c.tri();
  const auto& x = c.x();
  const auto& y = c.y();
  const int N = x.levels();
  const int K = G.k_max();
  for (int k = 1; k <= K + 2; ++k) {
    const double lam = pow2(k);
    const double rhs = std::ldexp(c.compressed_l2sq(k), -2 * k + 2) + 28 * std::ldexp(c.tail_mass(k), -k) +
                       distribution(x.at(1), lam);
    s.add("large", ratio(eta_distribution(t, lam), rhs), k);
  }
  double meet_mass = 0.0;
  for (int i = 0; i <= K; ++i) meet_mass += 1 - tau(G.e(i, N));
  for (int l = -10; l <= 0; ++l) {
    const double lam = pow2(l);
    s.add("small", ratio(eta_distribution(t, lam), distribution(x.at(1), lam) + meet_mass), l);
  }
  const double sc = scale_of(y);
  for (int k = 0; k <= K; ++k) {
    EtaFactorization ef = eta_factorization(x, y, G, k);
    double tr = 0.0, rhs = distribution(x.at(1), pow2(k));
    for (int i = k; i <= K; ++i) rhs += 1 - tau(G.e(i, N));
    for (int n = 1; n <= N; ++n) {
      tr += tau(ef.pi_k[n - 1]);
      s.add("pi_order", neg(min_eigenvalue(ef.pi_full[n - 1] - ef.pi_k[n - 1])) / 1e-9, n);
      if (k == 0)
        s.add("factorization", max_abs(ef.U[n - 1] * ef.pi_full[n - 1] * ef.V[n - 1] - t.eta[n]) / (1e-9 * sc), n);
      Matrix m = Matrix::Zero(x.dim(), x.dim());
      for (int i = k; i <= K; ++i) m += G.p(i, n) - G.p(i, n - 1) * G.p(i, n);
      s.add("property2", ratio(op_norm(m), 2.0, 1e-8), k);
    }
    s.add("big_proj", ratio(tr, rhs, 1e-8), k);
  }
}

void main_weak(TrialContext& c, const JobParams&, Sink& s) {
  const auto& t = c.tri();
  const double x1 = c.x_l1();
  const double a = seq_weak_norm(t.eta, SeqWeak::diag_amplified);
  const double b = seq_weak_norm(t.zeta, SeqWeak::cond_col);
  const double r = seq_weak_norm(t.xi, SeqWeak::cond_row);
  s.add("eta", ratio(a, 33 * x1));
  s.add("zeta", ratio(b, 9 * x1));
  s.add("xi", ratio(r, 9 * x1));
  s.add("sum", ratio(a + b + r, 51 * x1));
}

void main_weak_S(TrialContext& c, const JobParams&, Sink& s) {
  const auto& q = c.square();
  const double bound = k_main_s() * c.x_l1();
  s.add("column", ratio(weak_l1_norm(square_fn(q.column, Side::column)), bound));
  s.add("row", ratio(weak_l1_norm(square_fn(q.row, Side::row)), bound));
}

void dist_S(TrialContext& c, const JobParams&, Sink& s) {
  const auto& q = c.square();
  const Matrix sc = square_fn(q.column, Side::column);
  const Matrix sr = square_fn(q.row, Side::row);
  for (int k = 0; k <= c.grid().k_max(); ++k) {
    const double lam = pow2(k);
    const double rhs =
        std::ldexp(c.compressed_l2sq(k), -2 * k + 2) + (160 * kSqrt2 + 26) * std::ldexp(c.tail_mass(k), -k);
    s.add("column", ratio(distribution(sc, lam), rhs), k);
    s.add("row", ratio(distribution(sr, lam), rhs), k);
  }
}

void truncation_weak(TrialContext& c, const JobParams&, Sink& s) {
  auto g = c.rng("truncation_weak");
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  const auto& G = c.grid();
  const int d = G.dim();
  std::vector<Matrix> units;
  for (int i = 0; i < d; ++i) {
    Matrix e = Matrix::Zero(d, d);
    e(i, i) = 1.0;
    units.push_back(e);
  }
  for (int variant = 0; variant < 2; ++variant) {
    Matrix acc = Matrix::Zero(d, d);
    double rhs = 0.0;
    for (int n = 1; n <= G.levels(); ++n) {
      Matrix a = gaussian_matrix(d, g) * std::exp2(u(g));
      rhs += lp_norm(a, 1.0);
      Matrix t = triangular_truncation(a, variant == 0 ? G.partition(n) : units);
      acc += t.transpose() * t;
    }
    const double lhs = weak_l1_norm(psd_sqrt(0.5 * (acc + acc.transpose())));
    s.add(variant == 0 ? "grid_partitions" : "rank_one_partitions", ratio(lhs, 20 * kSqrt2 * rhs));
  }
}

void strong1_step1(TrialContext& c, const JobParams& jp, Sink& s) {
  const double p = jp.p;
  const auto& t = c.tri();
  const auto& w = c.davis();
  const double xp = lpp(c.x().final(), p);
  const double sz = lpp(c.sigma_zeta(), p);
  const double sx = lpp(c.sigma_xi(), p);
  s.add("zeta_p", ratio(sz, 1 + k_zeta(p) * xp));
  s.add("xi_p", ratio(sx, 1 + k_zeta(p) * xp));
  s.add("w_column", ratio(std::pow(hardy_norm(w.column, HardyNorm::hpc, p), p), sz));
  s.add("w_row", ratio(std::pow(hardy_norm(w.row, HardyNorm::hpr, p), p), sx));
  double eta_pp = 0.0;
  for (const auto& a : t.eta.terms) eta_pp += lpp(a, p);
  s.add("eta_p", ratio(std::exp2(p) * eta_pp, std::exp2(2 * p) + k_eta(p) * xp));
  s.add("w_diagonal", ratio(hardy_norm(w.diagonal, HardyNorm::hpd, p), 2 * std::pow(eta_pp, 1 / p)));
}

void strong1_cp(TrialContext& c, const JobParams& jp, Sink& s) {
  const double p = jp.p;
  const auto& G = c.grid();
  double best = kInf;
  int best_j = 0;
  for (int j = 0; j <= 10; ++j) {
    const double m = pow2(j);
    const Martingale ym = c.y().scaled(m);
    DavisTriple w = davis_triple(ym, triple(ym, G.shifted(j)));
    const double v = (hardy_norm(w.column, HardyNorm::hpc, p) + hardy_norm(w.row, HardyNorm::hpr, p) +
                      hardy_norm(w.diagonal, HardyNorm::hpd, p)) /
                     m;
    if (v < best) {
      best = v;
      best_j = j;
    }
  }
  s.add("scaled_min", ratio(best, c_strong(p) * lp_norm(c.x().final(), p)), best_j, false);
}

void strong2_dist(TrialContext& c, const JobParams& jp, Sink& s) {
  const double p = jp.p;
  const auto& q = c.square();
  const double bound = 1 + k_square(p) * lpp(c.x().final(), p);
  s.add("column", ratio(std::pow(hardy_norm(q.column, HardyNorm::Hpc, p), p), bound));
  s.add("row", ratio(std::pow(hardy_norm(q.row, HardyNorm::Hpr, p), p), bound));
}

void davis_l2(TrialContext& c, const JobParams&, Sink& s) {
  const auto& w = c.davis();
  const auto& q = c.square();
  const auto& t = c.tri();
  const auto& y = c.y();
  const double x2 = lp_norm(c.x().final(), 2.0);
  const double wd = lp_norm(w.diagonal.final(), 2.0);
  const double wc = lp_norm(w.column.final(), 2.0);
  const double wr = lp_norm(w.row.final(), 2.0);
  s.add("max_piece", ratio(std::max({wd, wc, wr}), 5 * x2));
  s.add("w_column", ratio(wc, 2 * x2));
  s.add("w_row", ratio(wr, 2 * x2));
  s.add("y_column", ratio(lp_norm(q.column.final(), 2.0), 2 * x2));
  s.add("y_row", ratio(lp_norm(q.row.final(), 2.0), 2 * x2));
  const double sc = scale_of(y);
  s.add("davis_reconstruction", reconstruction_error(y, {&w.diagonal, &w.column, &w.row}) / (1e-9 * sc));
  s.add("square_reconstruction", reconstruction_error(y, {&q.column, &q.row}) / (1e-9 * sc));
  double tr = 0.0;
  for (int n = 1; n <= y.levels(); ++n)
    tr = std::max(tr, max_abs(t.eta[n] + t.zeta[n] + t.xi[n] - y.diff(n)));
  s.add("triple_reconstruction", tr / (1e-9 * sc));
  const double adapted = std::max({t.eta.adaptedness_residual(), t.zeta.adaptedness_residual(),
                                   t.xi.adaptedness_residual()});
  s.add("triple_adapted", adapted / (1e-10 * sc));
  double mres = 0.0;
  for (const auto* m : {&w.diagonal, &w.column, &w.row, &q.column, &q.row})
    mres = std::max(mres, m->martingale_residual());
  s.add("martingale", mres / (1e-9 * sc));
}

void wang(TrialContext& c, const JobParams& jp, Sink& s) {
  const double p = jp.p;
  const auto& x = c.x();
  const double hpc = hardy_norm(x, HardyNorm::hpc, p);
  const double lp = lp_norm(x.final(), p);
  const double Hpc = hardy_norm(x, HardyNorm::Hpc, p);
  s.add("lp", ratio(lp, c_wang(p) * hpc));
  s.add("Hpc", ratio(Hpc, c_wang(p) * hpc));
  if (p == 2.0 && hpc > 0) {
    s.add("equality_lp", std::abs(lp / hpc - 1) / 1e-9);
    s.add("equality_Hpc", std::abs(Hpc / hpc - 1) / 1e-9);
  }
  if (!(hpc > 0)) return;
  const Martingale xt = x.scaled(1 / hpc);
  const double eps = 1e-6 * (1 + op_norm(xt.final()));
  WeightFunctional wf = weight_functional(xt, p, eps);
  s.add("above", ratio(wf.value * wf.value, 2 / p * wf.moment, 1e-7));
  for (std::size_t k = 0; k < wf.chain.size(); ++k)
    s.add("below",
          ratio(wf.chain[k], std::pow(wf.masses[k], 1 / p - 0.5) * wf.value * (1 + 1e-6)),
          static_cast<int>(k + 1));
  WeightFunctional fine = weight_functional(xt, p, eps / 10);
  const double drift = std::abs(wf.value - fine.value) / std::max(wf.value, 1e-300);
  if (drift >= 1e-4) s.unstable = true;
  s.add("stability", drift / 1e-4);
}

void hh(TrialContext& c, const JobParams& jp, Sink& s) {
  const double p = jp.p;
  const bool asserting = p >= 1;
  const auto& w = c.davis();
  MixedParts py{w.column, w.row, w.diagonal};
  s.add("y", ratio(lp_norm(c.y().final(), p), c_hh(p) * mixed_upper_bound(c.y(), py, MixedNorm::hp, p)),
        -1, asserting);
  DavisTriple wx = davis_triple(c.x(), c.grid());
  MixedParts px{wx.column, wx.row, wx.diagonal};
  s.add("x", ratio(lp_norm(c.x().final(), p), c_hh(p) * mixed_upper_bound(c.x(), px, MixedNorm::hp, p)),
        -1, asserting);
}

void integral_lemma(TrialContext& c, const JobParams& jp, Sink& s) {
  static const auto rule = [] {
    std::pair<std::vector<double>, std::vector<double>> r;
    gauss_legendre(64, r.first, r.second);
    return r;
  }();
  const double p = jp.p;
  auto g = c.rng("integral_lemma");
  const int d = std::min(c.x().dim(), 8);
  auto f = [p](double t) { return std::pow(std::max(t, 0.0), p / 2); };
  auto df = [p](double t) { return p / 2 * std::pow(std::max(t, 1e-300), p / 2 - 1); };
  for (int r = 0; r < 2; ++r) {
    Matrix G = gaussian_matrix(d, g), H = gaussian_matrix(d, g);
    Matrix a = G * G.transpose() / d + 0.05 * identity(d);
    Matrix b = H * H.transpose() / d * (r == 0 ? 1.0 : 10.0);
    const double lhs = tau(apply_function(Matrix(a + b), f) - apply_function(a, f));
    double rhs = 0.0;
    for (std::size_t i = 0; i < rule.first.size(); ++i) {
      const double t = 0.5 * (rule.first[i] + 1);
      rhs += 0.5 * rule.second[i] * tau(apply_function(Matrix(a + t * b), df) * b);
    }
    s.add("quadrature", std::abs(lhs - rhs) / (1e-6 * std::max(std::abs(lhs), 1e-12)), r);
  }
}

struct OrliczSetup {
  OrliczFunction phi;
  double c1, c2, moment;
  bool asserting;
};

OrliczSetup orlicz_setup(TrialContext& c, const JobParams& jp) {
  OrliczSetup o{make_orlicz(jp.phi, jp.q), 1.0, 1.0, 0.0, jp.phi == OrliczKind::power};
  if (o.asserting) {
    o.c1 = c_lemp(jp.q);
    o.c2 = c_last(jp.q);
  }
  for (int n = 1; n <= c.x().levels(); ++n) o.moment = std::max(o.moment, phi_moment(o.phi, c.x().at(n)));
  return o;
}

void orlicz_phi1(TrialContext& c, const JobParams& jp, Sink& s) {
  OrliczSetup o = orlicz_setup(c, jp);
  for (int k = 0; k <= c.grid().k_max(); ++k) {
    const double lhs = o.phi(pow2(k)) * std::ldexp(c.tail_mass(k), -k);
    s.add("phi1", ratio(lhs, o.c1 * o.moment), k, o.asserting);
  }
}

void orlicz_phi2(TrialContext& c, const JobParams& jp, Sink& s) {
  OrliczSetup o = orlicz_setup(c, jp);
  for (int k = 0; k <= c.grid().k_max(); ++k) {
    const double lhs = o.phi(pow2(k)) * std::ldexp(c.compressed_l2sq(k), -2 * k);
    s.add("phi2", ratio(lhs, o.c2 * o.moment), k, o.asserting);
  }
}

void orlicz_open_B(TrialContext& c, const JobParams& jp, Sink& s) {
  OrliczSetup o = orlicz_setup(c, jp);
  const auto& t = c.tri();
  const double M = o.moment;
  const double cr = o.asserting ? o.c2 + 8 * o.c1 : 1.0;
  const double dl = o.asserting ? 4 * o.c2 + 28 * o.c1 + 1 : 1.0;
  const double ds = o.asserting ? 1 + 4 * o.c1 : 1.0;
  const double tot = o.asserting ? 6 * o.c2 + 44 * o.c1 + 1 : 1.0;
  const int K = c.grid().k_max();
  for (int l = -10; l <= K + 2; ++l) {
    const double lam = pow2(l);
    const double ph = o.phi(lam);
    const double d = ph * eta_distribution(t, lam);
    s.add("diagonal", ratio(d, (l >= 1 ? dl : ds) * M), l, o.asserting);
    if (l < 0) continue;
    const double col = ph * distribution(c.sigma_zeta(), lam);
    const double row = ph * distribution(c.sigma_xi(), lam);
    s.add("column", ratio(col, cr * M), l, o.asserting);
    s.add("row", ratio(row, cr * M), l, o.asserting);
    s.add("total", ratio(col + row + d, tot * M), l, o.asserting);
  }
}

void orlicz_open_BG(TrialContext& c, const JobParams& jp, Sink& s) {
  OrliczSetup o = orlicz_setup(c, jp);
  const auto& q = c.square();
  const Matrix sc = square_fn(q.column, Side::column);
  const Matrix sr = square_fn(q.row, Side::row);
  const double side = o.asserting ? 4 * o.c2 + (160 * kSqrt2 + 26) * o.c1 : 1.0;
  for (int k = 0; k <= c.grid().k_max() + 2; ++k) {
    const double lam = pow2(k);
    const double col = o.phi(lam) * distribution(sc, lam);
    const double row = o.phi(lam) * distribution(sr, lam);
    s.add("column", ratio(col, side * o.moment), k, o.asserting);
    s.add("row", ratio(row, side * o.moment), k, o.asserting);
    s.add("total", ratio(col + row, 2 * side * o.moment), k, o.asserting);
  }
}

void classical_sanity(TrialContext& c, const JobParams&, Sink& s) {
  auto g = c.rng("classical_sanity");
  std::uniform_real_distribution<double> unit(-1.0, 1.0), coin(0.0, 1.0);
  const Filtration& f = c.x().filtration();
  const int d = c.x().dim();
  std::vector<Matrix> symbols;
  for (int n = 1; n <= c.x().levels(); ++n) {
    Matrix xi = Matrix::Zero(d, d);
    for (const auto& b : f.relative_commutant(n)) {
      const double e = coin(g) < 0.5 ? (coin(g) < 0.5 ? 1.0 : -1.0) : unit(g);
      xi += e * b;
    }
    symbols.push_back(xi);
  }
  MartingalePair pr = transform_pair(c.x(), symbols);
  const Matrix sx = square_fn(pr.x, Side::column);
  const Matrix sy = square_fn(pr.y, Side::column);
  s.add("psd_order", neg(min_eigenvalue(sx - sy)) / 1e-9, -1, false);
  s.add("weak_order", ratio(weak_l1_norm(sy), weak_l1_norm(sx)), -1, false);
  s.add("weak_ratio", ratio(weak_l1_norm(sx), 2 * c.x_l1()), -1, false);
}

void probe_weak_sc(TrialContext& c, const JobParams&, Sink& s) {
  const double sc = std::max(weak_l1_norm(cond_square_fn(c.x(), Side::column)), 1e-12);
  s.add("x_over_sc", weak_l1_norm(c.x().final()) / sc, -1, false);
  s.add("Sc_over_sc", weak_l1_norm(square_fn(c.x(), Side::column)) / sc, -1, false);
  s.add("y_over_sc", weak_l1_norm(c.y().final()) / sc, -1, false);
}

void probe_cp(TrialContext& c, const JobParams& jp, Sink& s) {
  const double p = jp.p;
  DavisTriple wx = davis_triple(c.x(), c.grid());
  MixedParts px{wx.column, wx.row, wx.diagonal};
  const double upper_x = mixed_upper_bound(c.x(), px, MixedNorm::hp, p);
  const double lower_y = lp_norm(c.y().final(), p) / c_hh(p);
  s.add("hp_ratio_lower_bound", lower_y / std::max(upper_x, 1e-12), -1, false);
}

void subordination(TrialContext& c, const JobParams&, Sink& s) {
  const auto& G = c.grid();
  const auto& x = c.x();
  const int N = x.levels();
  CandidateSets cs(N);
  for (int n = 1; n <= N; ++n)
    for (int k = std::max(G.lowest(), -8); k <= G.k_max(); ++k) {
      cs[n - 1].push_back(G.e(k, n - 1));
      cs[n - 1].push_back(G.q(k, n - 1));
    }
  double big = 0.0;
  for (int n = 1; n <= N; ++n) big = std::max(big, max_abs(x.diff(n)));
  const double scale = 1e-8 * (1 + big * big);
  const std::uint64_t seed = mix(c.seed(), hash_name("subordination"));
  const std::pair<SubordinationMode, const char*> modes[] = {{SubordinationMode::very_weak, "very_weak"},
                                                             {SubordinationMode::weak_sampled, "weak"},
                                                             {SubordinationMode::ds_sampled, "trace_form"}};
  for (const auto& [mode, name] : modes) {
    SubordinationCertificate cert = check_subordination(x, c.y(), mode, 8, seed, cs);
    s.add(name, std::max(neg(cert.worst_margin) / scale, cert.holds ? 0.0 : kInf), cert.witness_level);
  }
}

const std::vector<std::string> kCore{"algebra", "filtration", "cuculescu"};

std::vector<std::string> mods(std::initializer_list<const char*> extra) {
  std::vector<std::string> m = kCore;
  for (const char* e : extra) m.emplace_back(e);
  return m;
}

}  // namespace

// ---------------------------------------------------------------- registry

const std::vector<CheckEntry>& registry() {
  static const std::vector<CheckEntry> reg = [] {
    std::vector<CheckEntry> r;
    auto add = [&](std::string name, std::string loc, std::string anchor, std::string expr,
                   std::vector<std::string> modules, EvalFn fn, bool asserting = true,
                   std::string param = "", bool dyadic_only = false) {
      r.push_back({CheckInfo{std::move(name), std::move(loc), std::move(anchor), std::move(expr),
                             std::move(modules), asserting, std::move(param)},
                   fn, dyadic_only});
    };
    add("quasi_triangle", "Lemma: quasi-triangle inequality for distribution functions",
        "be τ-measurable operators and t, s > 0", "1", {"algebra"}, quasi_triangle);
    add("cuculescu_props", "Proposition: Cuculescu projections", "satisfies the following properties",
        "1/lambda", kCore, cuculescu_props);
    add("grid_props", "Construction of the projection grid e, pi, p",
        "p_{0,n} := e_{0,n}, p_{i,n} := π_{i,n} for i ≥ 1", "1", kCore, grid_props);
    add("e_estimate", "Estimate for the meets e_{k,N}", "satisfies similar properties as displayed",
        "2^{-k+1}", kCore, e_estimate);
    add("l2norm_i", "Lemma: L2-norm estimates, part (i)", "For every λ>0, the following inequality holds",
        "2*lambda", kCore, l2norm_i);
    add("l2norm_ii", "Lemma: L2-norm estimates, part (ii)", "For every λ>0, the following inequality holds",
        "2^{k+1}", kCore, l2norm_ii);
    add("l2norm_iii", "Lemma: L2-norm estimates, part (iii)", "For every λ>0, the following inequality holds",
        "6*2^k", kCore, l2norm_iii);
    add("lem_p", "Lemma: weighted tail sum of the meets", "be a self-adjoint L_p-bounded martingale",
        "2^{(p-1)^2}/(2^{p-1}-1)^p", kCore, lem_p, true, "p");
    add("lem_last", "Lemma: weighted compressed L2 sum", "self-adjoint martingale that is L_p-bounded",
        "2^{p^2+1}/((1-2^{p-2})(2^{p-1}-1)^p)", kCore, lem_last, true, "p");
    add("gundy_bounds", "Theorem: Gundy decomposition", "there exist four martingales", "(2*lambda, 4, 1)",
        mods({"decompose"}), gundy_bounds);
    add("weaktype_11", "Theorem: weak type (1,1) under weak differential subordination",
        "c=2+2B²+4B/(B−1)", "2+2B^2+4B/(B-1)", mods({"decompose"}), weaktype_11, true, "B");
    add("transfer", "Lemma: transfer", "For every k≥0 and n≥2, the following two inequalities hold", "1",
        mods({"decompose"}), transfer);
    add("dist_c", "Proposition: column and row distribution estimate",
        "For every k≥0, the following two inequalities hold", "(1, 8)", mods({"decompose", "hardy"}), dist_c);
    add("dist_d", "Proposition: diagonal distribution estimate", "For every k≥1, the following estimate holds",
        "(4, 28, 1)", mods({"decompose", "hardy"}), dist_d);
    add("main_weak", "Theorem: weak type decomposition into three adapted sequences",
        "there exist three adapted sequences", "(33, 9, 9, 51)", mods({"decompose", "hardy"}), main_weak);
    add("main_weak_S", "Theorem: weak type square function decomposition", "there exist two martingales",
        "10+160*sqrt(2)", mods({"decompose", "hardy"}), main_weak_S);
    add("dist_S", "Remark: distribution estimate for the square decomposition", "[160√2 + 26] 2^{−k}",
        "(4, 160*sqrt(2)+26)", mods({"decompose", "hardy"}), dist_S);
    add("truncation_weak", "Lemma: triangular truncations in weak L1", "≤ 20√2 Σ", "20*sqrt(2)",
        mods({"decompose"}), truncation_weak);
    add("strong1_step1", "Theorem: strong type in conditioned Hardy spaces, first step",
        "8+ 6/(1−2^{p−2})", "2^{p^2}/(2^{p-1}-1)^p*[8+6/(1-2^{p-2})]; 2^{p^2+p}/(2^{p-1}-1)^p*[77+24/(1-2^{p-2})]",
        mods({"decompose", "hardy"}), strong1_step1, true, "p");
    add("strong1_cp", "Theorem: strong type in conditioned Hardy spaces",
        "c_p =2^{p+1}/(2^{p−1}−1)·[…]",
        "2^{p+1}/(2^{p-1}-1)*[(8+6/(1-2^{p-2}))^{1/p}+(77+24/(1-2^{p-2}))^{1/p}]", mods({"decompose", "hardy"}),
        strong1_cp, false, "p");
    add("strong2_dist", "Theorem: strong type in Hardy spaces", "c_p= O((p−1)^{−1})",
        "(2^p-1)*[4*2^{p^2+1}/((1-2^{p-2})(2^{p-1}-1)^p)+(160*sqrt(2)+26)*2^{(p-1)^2}/(2^{p-1}-1)^p]",
        mods({"decompose", "hardy"}), strong2_dist, true, "p");
    add("davis_l2", "Corollary: L2 bounds for the Davis pieces", "≤ 5‖x‖₂", "5", mods({"decompose", "hardy"}),
        davis_l2);
    add("wang", "Theorem: L_p versus conditioned Hardy norms", "the constant √(2/p) is the best possible",
        "sqrt(2/p)", {"algebra", "filtration", "hardy"}, wang, true, "p");
    add("hh", "Corollary: L_p versus mixed conditioned Hardy norms", "3^{(1−p)/p}√(2/p)",
        "sqrt(2/p) (p >= 1); 3^{(1-p)/p}*sqrt(2/p) (p < 1)", mods({"decompose", "hardy"}), hh, true, "p");
    add("integral_lemma", "Lemma: integral formula for trace differences", "f be a function in C¹(ℝ₊)",
        "1e-6 relative", {"algebra"}, integral_lemma, true, "p");
    add("orlicz_phi1", "Lemma: Phi-moment tail estimate", "satisfies the Δ₂-condition",
        "2^{(q-1)^2}/(2^{q-1}-1)^q", mods({"orlicz"}), orlicz_phi1, true, "q");
    add("orlicz_phi2", "Lemma: Phi-moment compressed L2 estimate", "There exists a constant C_Φ",
        "2^{q^2+1}/((1-2^{q-2})(2^{q-1}-1)^q)", mods({"orlicz"}), orlicz_phi2, true, "q");
    add("orlicz_open_B", "Theorem: Phi-moment weak type for the three adapted sequences",
        "There exists a constant C_Φ", "column/row c'+8c; diagonal 4c'+28c+1 (1+4c below 1); total 6c'+44c+1",
        mods({"decompose", "hardy", "orlicz"}), orlicz_open_B, true, "q");
    add("orlicz_open_BG", "Theorem: Phi-moment weak type for the square decomposition",
        "There exists a constant C_Φ", "per side 4c'+(160*sqrt(2)+26)c",
        mods({"decompose", "hardy", "orlicz"}), orlicz_open_BG, true, "q");
    add("classical_sanity", "Classical square function inequalities",
        "‖S(g)‖_{1,∞} ≤ ‖S(f)‖_{1,∞} ≤ 2‖f‖₁", "2", {"algebra", "filtration", "hardy"}, classical_sanity, false,
        "", true);
    add("probe_weak_sc", "Open question: weak type bounds by the conditioned square function",
        "conditioned square function", "report", {"algebra", "filtration", "hardy"}, probe_weak_sc, false);
    add("probe_cp", "Problem: uniform boundedness of c_p as p tends to 1",
        "Does there exist an absolute constant", "report", mods({"decompose", "hardy"}), probe_cp, false, "p");
    add("subordination", "Definition: weak differential subordination",
        "martingale transforms with commuting symbols", "margin >= -1e-8*(1+|dx|^2)", kCore, subordination);
    return r;
  }();
  return reg;
}

const CheckEntry& entry(const std::string& name) {
  for (const auto& e : registry())
    if (e.info.name == name) return e;
  throw Error(Errc::unknown_check, "unknown check '" + name + "'");
}

bool asserting_for(const CheckEntry& e, const JobParams& jp) {
  if (!e.info.asserting) return false;
  if (e.info.name == "hh") return jp.p >= 1;
  if (e.info.param == "q") return jp.phi == OrliczKind::power;
  return true;
}

std::pair<std::string, double> constant_of(const CheckEntry& e, const JobParams& jp) {
  const std::string& n = e.info.name;
  const double p = jp.p, q = jp.q;
  const std::string expr = e.info.constant_expr;
  if (n == "e_estimate") return {expr, 2.0};
  if (n == "l2norm_i" || n == "l2norm_ii") return {expr, 2.0};
  if (n == "l2norm_iii") return {expr, 6.0};
  if (n == "lem_p") return {expr, c_lemp(p)};
  if (n == "lem_last") return {expr, c_last(p)};
  if (n == "gundy_bounds") return {expr, 4.0};
  if (n == "weaktype_11") return {expr, c_weak(jp.B)};
  if (n == "dist_c") return {expr, 8.0};
  if (n == "dist_d") return {expr, 28.0};
  if (n == "main_weak") return {expr, 51.0};
  if (n == "main_weak_S") return {expr, k_main_s()};
  if (n == "dist_S") return {expr, 160 * kSqrt2 + 26};
  if (n == "truncation_weak") return {expr, 20 * kSqrt2};
  if (n == "strong1_step1") return {expr, k_zeta(p)};
  if (n == "strong1_cp") return {expr, c_strong(p)};
  if (n == "strong2_dist") return {expr, k_square(p)};
  if (n == "davis_l2") return {expr, 5.0};
  if (n == "wang") return {expr, c_wang(p)};
  if (n == "hh") return {expr, c_hh(p)};
  if (n == "integral_lemma") return {expr, 1e-6};
  if (e.info.param == "q") {
    if (jp.phi != OrliczKind::power) return {"1 (report: ratio to the Phi-moment)", 1.0};
    const double c1 = c_lemp(q), c2 = c_last(q);
    if (n == "orlicz_phi1") return {expr, c1};
    if (n == "orlicz_phi2") return {expr, c2};
    if (n == "orlicz_open_B") return {expr, 6 * c2 + 44 * c1 + 1};
    return {expr, 2 * (4 * c2 + (160 * kSqrt2 + 26) * c1)};
  }
  if (n == "classical_sanity") return {expr, 2.0};
  return {expr, 1.0};
}

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 1; j <= n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j - 1) * z * p1 - (j - 1.0) * p2) / j;
      }
      dp = n * (z * p0 - p1) / (z * z - 1);
      const double dz = p0 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    nodes[i] = -z;
    nodes[n - 1 - i] = z;
    weights[i] = weights[n - 1 - i] = 2 / ((1 - z * z) * dp * dp);
  }
}

}  // namespace ncmart::detail

namespace ncmart::constants {
double weak_type_c(double B) { return detail::c_weak(B); }
double lem_p(double p) { return detail::c_lemp(p); }
double lem_last(double p) { return detail::c_last(p); }
double K_zeta(double p) { return detail::k_zeta(p); }
double K_eta(double p) { return detail::k_eta(p); }
double K_square(double p) { return detail::k_square(p); }
double main_weak_S() { return detail::k_main_s(); }
double strong_cp(double p) { return detail::c_strong(p); }
double wang(double p) { return detail::c_wang(p); }
double hh(double p) { return detail::c_hh(p); }
}  // namespace ncmart::constants
