#include "ncmart/orlicz.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

namespace ncmart {

namespace {

std::vector<double> log_grid(double lo, double hi, int n) {
  std::vector<double> g(n);
  const double a = std::log(lo), b = std::log(hi);
  for (int i = 0; i < n; ++i) g[i] = std::exp(a + (b - a) * i / (n - 1));
  return g;
}

}  // namespace

const char* orlicz_kind_name(OrliczKind kind) {
  switch (kind) {
    case OrliczKind::power: return "power";
    case OrliczKind::power_log: return "power_log";
    case OrliczKind::custom: return "custom";
  }
  return "custom";
}

std::string OrliczFunction::label() const {
  std::ostringstream os;
  os << orlicz_kind_name(kind_) << "(q=" << q_ << ")";
  return os.str();
}

void OrliczFunction::validate() {
  if (std::abs(phi_(0.0)) > 0) throw Error(Errc::not_convex, "Phi(0) must be 0");
  const auto t = log_grid(1e-6, 1e6, 200);
  std::vector<double> f(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) f[i] = phi_(t[i]);
  double prev_slope = (f[0] - 0.0) / t[0];
  for (std::size_t i = 1; i < t.size(); ++i) {
    if (f[i] < f[i - 1]) throw Error(Errc::not_convex, "Phi is not increasing on the grid");
    const double slope = (f[i] - f[i - 1]) / (t[i] - t[i - 1]);
    if (slope - prev_slope < -1e-9 * (1.0 + std::abs(prev_slope)))
      throw Error(Errc::not_convex, "Phi fails the discrete convexity test near t = " +
                                        std::to_string(t[i]));
    prev_slope = slope;
  }
  // q-concavity: u -> Phi(u^{1/q}) concave.
  std::vector<double> u(t.size()), g(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    u[i] = std::pow(t[i], q_);
    g[i] = f[i];
  }
  prev_slope = g[0] / u[0];
  for (std::size_t i = 1; i < t.size(); ++i) {
    const double slope = (g[i] - g[i - 1]) / (u[i] - u[i - 1]);
    if (slope - prev_slope > 1e-9 * (1.0 + std::abs(prev_slope)))
      throw Error(Errc::not_q_concave, "Phi(t^{1/q}) fails the discrete concavity test near t = " +
                                           std::to_string(t[i]));
    prev_slope = slope;
  }
  delta2_ = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    delta2_ = std::max(delta2_, phi_(2 * t[i]) / f[i]);
    const double tp = t[i] * dphi_(t[i]);
    const double tol = 1e-8 * (1.0 + f[i]);
    if (tp < f[i] - tol) throw Error(Errc::not_convex, "Phi(t) > t phi(t) on the grid");
    if (tp > q_ * f[i] + tol) throw Error(Errc::not_q_concave, "t phi(t) > q Phi(t) on the grid");
  }
}

OrliczFunction make_orlicz(OrliczKind kind, double q) {
  if (!(q >= 1.0) || !std::isfinite(q))
    throw Error(Errc::not_convex, "Orlicz exponent must be at least 1");
  OrliczFunction o;
  o.q_ = q;
  o.kind_ = kind;
  switch (kind) {
    case OrliczKind::power:
      o.phi_ = [q](double t) { return t <= 0 ? 0.0 : std::pow(t, q); };
      o.dphi_ = [q](double t) { return q == 1.0 ? 1.0 : (t <= 0 ? 0.0 : q * std::pow(t, q - 1)); };
      break;
    case OrliczKind::power_log:
      o.phi_ = [q](double t) { return t <= 0 ? 0.0 : std::pow(t, q) / (1.0 + std::log1p(t)); };
      o.dphi_ = [q](double t) {
        if (t <= 0) return q == 1.0 ? 1.0 : 0.0;
        const double L = 1.0 + std::log1p(t);
        return (q * std::pow(t, q - 1) * L - std::pow(t, q) / (1.0 + t)) / (L * L);
      };
      break;
    case OrliczKind::custom:
      throw Error(Errc::bad_params, "custom Orlicz functions need explicit Phi and phi");
  }
  o.validate();
  return o;
}

OrliczFunction make_custom_orlicz(std::function<double(double)> phi,
                                  std::function<double(double)> dphi, double q) {
  OrliczFunction o;
  o.phi_ = std::move(phi);
  o.dphi_ = std::move(dphi);
  o.q_ = q;
  o.kind_ = OrliczKind::custom;
  o.validate();
  return o;
}

double phi_moment(const OrliczFunction& phi, const SingularProfile& s) {
  if (s.dim() == 0) return 0.0;
  double acc = 0.0;
  for (int j = 0; j < s.dim(); ++j) acc += phi(s.values(j));
  return acc / s.dim();
}

double phi_moment(const OrliczFunction& phi, const Matrix& a) {
  return phi_moment(phi, singular_values(a));
}

double orlicz_conjugate(const OrliczFunction& phi, double v) {
  if (!(v >= 0)) throw Error(Errc::domain_error, "conjugate needs v >= 0");
  if (v == 0) return 0.0;
  auto h = [&](double u) { return u * v - phi(u); };
  const auto grid = log_grid(1e-12, 1e12, 481);
  std::size_t best = 0;
  double best_val = h(grid[0]);
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double val = h(grid[i]);
    if (val > best_val) {
      best_val = val;
      best = i;
    }
  }
  if (best + 1 == grid.size()) return kInf;
  if (best_val <= 0.0) return 0.0;
  double lo = best == 0 ? 0.0 : grid[best - 1];
  double hi = grid[best + 1];
  const double r = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = hi - r * (hi - lo), b = lo + r * (hi - lo);
  double fa = h(a), fb = h(b);
  for (int it = 0; it < 300 && (hi - lo) > 1e-12 * hi; ++it) {
    if (fa < fb) {
      lo = a;
      a = b;
      fa = fb;
      b = lo + r * (hi - lo);
      fb = h(b);
    } else {
      hi = b;
      b = a;
      fb = fa;
      a = hi - r * (hi - lo);
      fa = h(a);
    }
  }
  return std::max({fa, fb, best_val, 0.0});
}

double conjugate_shrink_factor(const OrliczFunction& phi) {
  const auto us = log_grid(1e-3, 1e3, 61);
  std::vector<double> base;
  for (double u : us) base.push_back(orlicz_conjugate(phi, u));
  auto ok = [&](double t) {
    for (std::size_t i = 0; i < us.size(); ++i)
      if (std::isfinite(base[i]) && orlicz_conjugate(phi, t * us[i]) > base[i] / (2 * phi.q()))
        return false;
    return true;
  };
  double lo = 0.0, hi = 1.0;
  if (ok(hi)) return hi;
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    (ok(mid) ? lo : hi) = mid;
  }
  return lo;
}

}  // namespace ncmart
