#include "ncmart/hardy.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace ncmart {

namespace {

Matrix gram(const Matrix& a, Side side) {
  return side == Side::column ? Matrix(a.transpose() * a) : Matrix(a * a.transpose());
}

Matrix sym(const Matrix& a) { return 0.5 * (a + a.transpose()); }

int resolve(const Martingale& x, int upto) {
  if (upto < 0) return x.levels();
  if (upto > x.levels()) throw Error(Errc::index_out_of_range, "square function index out of range");
  return upto;
}

}  // namespace

Matrix square_fn_sq(const Martingale& x, Side side, int upto) {
  const int m = resolve(x, upto);
  Matrix acc = Matrix::Zero(x.dim(), x.dim());
  for (int k = 1; k <= m; ++k) acc += gram(x.diff(k), side);
  return sym(acc);
}

Matrix cond_square_fn_sq(const Martingale& x, Side side, int upto) {
  const int m = resolve(x, upto);
  const Filtration& f = x.filtration();
  Matrix acc = Matrix::Zero(x.dim(), x.dim());
  for (int k = 1; k <= m; ++k) acc += f.condexp(k - 1, gram(x.diff(k), side));
  return sym(acc);
}

Matrix square_fn(const Martingale& x, Side side, int upto) {
  return psd_sqrt(square_fn_sq(x, side, upto));
}

Matrix cond_square_fn(const Martingale& x, Side side, int upto) {
  return psd_sqrt(cond_square_fn_sq(x, side, upto));
}

Matrix sigma_c(const AdaptedSequence& a, Side side) {
  const int d = a.filtration->dim();
  Matrix acc = Matrix::Zero(d, d);
  for (int k = 1; k <= a.levels(); ++k) acc += a.filtration->condexp(k - 1, gram(a[k], side));
  return psd_sqrt(sym(acc));
}

double hardy_norm(const Martingale& x, HardyNorm which, double p) {
  if (!(p > 0)) throw Error(Errc::bad_exponent, "Hardy norms need p > 0");
  switch (which) {
    case HardyNorm::hpc: return lp_norm(cond_square_fn(x, Side::column), p);
    case HardyNorm::hpr: return lp_norm(cond_square_fn(x, Side::row), p);
    case HardyNorm::Hpc: return lp_norm(square_fn(x, Side::column), p);
    case HardyNorm::Hpr: return lp_norm(square_fn(x, Side::row), p);
    case HardyNorm::hpd: {
      double acc = 0.0;
      for (int n = 1; n <= x.levels(); ++n) acc += std::pow(lp_norm(x.diff(n), p), p);
      return std::pow(acc, 1.0 / p);
    }
  }
  return 0.0;
}

double seq_weak_norm(const AdaptedSequence& s, SeqWeak which) {
  switch (which) {
    case SeqWeak::cond_col: return weak_l1_norm(sigma_c(s, Side::column));
    case SeqWeak::cond_row: return weak_l1_norm(sigma_c(s, Side::row));
    case SeqWeak::diag_amplified: {
      std::vector<double> all;
      int d = s.filtration ? s.filtration->dim() : 0;
      for (const auto& a : s.terms) {
        SingularProfile sp = singular_values(a);
        d = sp.dim();
        for (int j = 0; j < sp.dim(); ++j) all.push_back(sp.values(j));
      }
      if (d == 0) return 0.0;
      std::sort(all.begin(), all.end(), std::greater<>());
      double best = 0.0;
      for (std::size_t j = 0; j < all.size(); ++j)
        best = std::max(best, static_cast<double>(j + 1) / d * all[j]);
      return best;
    }
  }
  return 0.0;
}

double mixed_upper_bound(const Martingale& target, const MixedParts& parts, MixedNorm which,
                         double p) {
  if (!(p > 0)) throw Error(Errc::bad_exponent, "mixed norms need p > 0");
  if (which == MixedNorm::Hp && parts.diagonal)
    throw Error(Errc::bad_params, "the H_p mixed norm has no diagonal piece");
  Matrix sum = Matrix::Zero(target.dim(), target.dim());
  for (const auto* piece : {&parts.column, &parts.row, &parts.diagonal})
    if (*piece) sum += (*piece)->final();
  const double scale = 1.0 + target.final().cwiseAbs().maxCoeff();
  if ((sum - target.final()).cwiseAbs().maxCoeff() > 1e-8 * scale)
    throw Error(Errc::reconstruction_mismatch, "decomposition pieces do not add up to the target");
  double total = 0.0;
  if (which == MixedNorm::hp) {
    if (parts.column) total += hardy_norm(*parts.column, HardyNorm::hpc, p);
    if (parts.row) total += hardy_norm(*parts.row, HardyNorm::hpr, p);
    if (parts.diagonal) total += hardy_norm(*parts.diagonal, HardyNorm::hpd, p);
  } else {
    if (parts.column) total += hardy_norm(*parts.column, HardyNorm::Hpc, p);
    if (parts.row) total += hardy_norm(*parts.row, HardyNorm::Hpr, p);
  }
  return total;
}

WeightFunctional weight_functional(const Martingale& x, double p, double eps_reg) {
  if (!(p > 0 && p <= 2)) throw Error(Errc::bad_exponent, "weight functional needs 0 < p <= 2");
  const int N = x.levels();
  const int d = x.dim();
  const Filtration& f = x.filtration();
  const double e2 = eps_reg * eps_reg;
  const double expo = (p - 2.0) / 2.0;  // exponent of (s^2 + eps^2) in w^{1-2/p}
  WeightFunctional out;
  Matrix s2 = Matrix::Zero(d, d);
  double acc = 0.0;
  std::vector<Matrix> s2_levels;
  for (int n = 1; n <= N; ++n) {
    const Matrix& dx = x.diff(n);
    s2 += f.condexp(n - 1, dx.transpose() * dx);
    s2 = sym(s2);
    s2_levels.push_back(s2);
    Matrix weight = apply_function(s2, [&](double t) { return std::pow(std::max(t, 0.0) + e2, expo); });
    acc += normalized_trace(weight * dx.transpose() * dx);
  }
  out.value = std::sqrt(std::max(acc, 0.0));
  auto mass = [&](const Matrix& m) {
    return normalized_trace(
        apply_function(m, [&](double t) { return std::pow(std::max(t, 0.0) + e2, p / 2.0); }));
  };
  for (int k = 1; k <= N; ++k) {
    out.chain.push_back(lp_norm(x.at(k), p));
    out.masses.push_back(mass(s2_levels[std::min(k, N - 1)]));
  }
  out.moment = mass(s2_levels.back());
  return out;
}

}  // namespace ncmart
