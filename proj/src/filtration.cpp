#include "ncmart/filtration.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include <unsupported/Eigen/KroneckerProduct>

namespace ncmart {

namespace {

constexpr double kSubalgebraTol = 1e-8;

Vector vec(const Matrix& a) { return Eigen::Map<const Vector>(a.data(), a.size()); }

Matrix unvec(const Vector& v, int d) { return Eigen::Map<const Matrix>(v.data(), d, d); }

/// Orthonormal basis (columns) of the span of the vectorized matrices.
Matrix orthonormal_span(const std::vector<Matrix>& mats, int d) {
  if (mats.empty()) return Matrix(d * d, 0);
  Matrix cols(d * d, static_cast<int>(mats.size()));
  for (std::size_t i = 0; i < mats.size(); ++i) cols.col(static_cast<int>(i)) = vec(mats[i]);
  Eigen::ColPivHouseholderQR<Matrix> qr(cols);
  qr.setThreshold(1e-10);
  const int r = static_cast<int>(qr.rank());
  Matrix q = qr.householderQ() * Matrix::Identity(d * d, r);
  return q;
}

double span_residual(const Matrix& basis, const Matrix& a) {
  Vector v = vec(a);
  Vector r = v - basis * (basis.transpose() * v);
  return r.norm() / (1.0 + v.norm());
}

std::vector<int> boundaries(const std::vector<int>& sizes) {
  std::vector<int> b{0};
  for (int s : sizes) b.push_back(b.back() + s);
  return b;
}

Matrix random_symmetric(int d, std::mt19937_64& rng, Law law) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  Matrix g(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = i; j < d; ++j) {
      const double v = law == Law::gaussian ? normal(rng) : unif(rng);
      g(i, j) = v;
      g(j, i) = v;
    }
  return g;
}

Matrix positive_part_projection(const Matrix& g) {
  Eigensystem es = eigh(g);
  const int d = static_cast<int>(g.rows());
  const double tol = 1e-10 * (1.0 + es.values.cwiseAbs().maxCoeff());
  Matrix p = Matrix::Zero(d, d);
  for (int j = 0; j < d; ++j)
    if (es.values(j) > tol) p += es.vectors.col(j) * es.vectors.col(j).transpose();
  return p;
}

bool same_filtration(const Filtration& a, const Filtration& b) {
  if (&a == &b) return true;
  return a.kind() == b.kind() && a.dim() == b.dim() && a.levels() == b.levels() &&
         a.blocks() == b.blocks() && a.dyadic_depth() == b.dyadic_depth() &&
         a.kind() != FiltrationKind::generic;
}

}  // namespace

const char* kind_name(FiltrationKind kind) {
  switch (kind) {
    case FiltrationKind::dyadic: return "dyadic";
    case FiltrationKind::tensor: return "tensor";
    case FiltrationKind::pinching: return "pinching";
    case FiltrationKind::generic: return "generic";
  }
  return "unknown";
}

FiltrationKind parse_kind(const std::string& name) {
  if (name == "dyadic") return FiltrationKind::dyadic;
  if (name == "tensor") return FiltrationKind::tensor;
  if (name == "pinching") return FiltrationKind::pinching;
  if (name == "generic") return FiltrationKind::generic;
  throw Error(Errc::bad_params, "unknown filtration kind '" + name + "'");
}

FiltrationPtr Filtration::dyadic(int L, int levels) {
  if (L < 1 || L > 12 || levels < 1 || levels > L)
    throw Error(Errc::bad_params, "dyadic filtration needs 1 <= levels <= L <= 12");
  std::shared_ptr<Filtration> f(new Filtration());
  f->kind_ = FiltrationKind::dyadic;
  f->dim_ = 1 << L;
  f->levels_ = levels;
  f->depth_ = L;
  for (int n = 1; n <= levels; ++n) f->blocks_.emplace_back(1 << n, 1 << (L - n));
  return f;
}

FiltrationPtr Filtration::tensor(int levels) {
  if (levels < 1 || levels > 6) throw Error(Errc::bad_params, "tensor filtration needs 1 <= N <= 6");
  std::shared_ptr<Filtration> f(new Filtration());
  f->kind_ = FiltrationKind::tensor;
  f->dim_ = 1 << levels;
  f->levels_ = levels;
  f->depth_ = levels;
  return f;
}

FiltrationPtr Filtration::pinching(std::vector<std::vector<int>> block_sizes) {
  if (block_sizes.empty()) throw Error(Errc::bad_params, "pinching filtration needs a level");
  int d = 0;
  for (int s : block_sizes.back()) d += s;
  if (block_sizes.back().size() != 1 || d < 1)
    throw Error(Errc::bad_params, "pinching chain must end in a single block");
  for (std::size_t n = 0; n < block_sizes.size(); ++n) {
    int sum = 0;
    for (int s : block_sizes[n]) {
      if (s < 1) throw Error(Errc::bad_params, "pinching block sizes must be positive");
      sum += s;
    }
    if (sum != d) throw Error(Errc::bad_params, "pinching partitions must cover the same dimension");
    if (n > 0) {
      auto fine = boundaries(block_sizes[n - 1]);
      auto coarse = boundaries(block_sizes[n]);
      for (int b : coarse)
        if (!std::binary_search(fine.begin(), fine.end(), b))
          throw Error(Errc::bad_params, "pinching partitions must coarsen from level to level");
      if (coarse.size() >= fine.size())
        throw Error(Errc::bad_params, "pinching partitions must strictly coarsen");
    }
  }
  std::shared_ptr<Filtration> f(new Filtration());
  f->kind_ = FiltrationKind::pinching;
  f->dim_ = d;
  f->levels_ = static_cast<int>(block_sizes.size());
  f->blocks_ = std::move(block_sizes);
  return f;
}

FiltrationPtr Filtration::generic(int dim, const std::vector<std::vector<Matrix>>& spanning) {
  if (dim < 1 || spanning.empty()) throw Error(Errc::bad_params, "generic filtration needs levels");
  std::shared_ptr<Filtration> f(new Filtration());
  f->kind_ = FiltrationKind::generic;
  f->dim_ = dim;
  f->levels_ = static_cast<int>(spanning.size());
  const Matrix id = identity(dim);
  for (std::size_t n = 0; n < spanning.size(); ++n) {
    for (const auto& m : spanning[n])
      if (m.rows() != dim || m.cols() != dim)
        throw Error(Errc::bad_params, "generic spanning element has the wrong shape");
    Matrix q = orthonormal_span(spanning[n], dim);
    const std::string lvl = " at level " + std::to_string(n + 1);
    if (span_residual(q, id) > kSubalgebraTol)
      throw Error(Errc::not_a_subalgebra, "identity not in span" + lvl);
    for (const auto& a : spanning[n]) {
      if (span_residual(q, a.transpose()) > kSubalgebraTol)
        throw Error(Errc::not_a_subalgebra, "adjoint leaves span" + lvl);
      for (const auto& b : spanning[n])
        if (span_residual(q, a * b) > kSubalgebraTol)
          throw Error(Errc::not_a_subalgebra, "product leaves span" + lvl);
    }
    if (n > 0)
      for (const auto& a : spanning[n - 1])
        if (span_residual(q, a) > kSubalgebraTol)
          throw Error(Errc::not_a_subalgebra, "levels are not increasing" + lvl);
    f->generic_bases_.push_back(q);
  }
  f->generic_spans_ = spanning;
  return f;
}

void Filtration::check_level(int n) const {
  if (n < 0 || n > levels_)
    throw Error(Errc::index_out_of_range,
                "level " + std::to_string(n) + " outside 0.." + std::to_string(levels_));
}

Matrix Filtration::condexp(int n, const Matrix& a) const {
  check_level(n);
  if (a.rows() != dim_ || a.cols() != dim_)
    throw Error(Errc::bad_params, "condexp: element dimension does not match the filtration");
  if (n == 0) n = 1;
  const int d = dim_;
  switch (kind_) {
    case FiltrationKind::dyadic: {
      Matrix out = Matrix::Zero(d, d);
      int start = 0;
      for (int size : blocks_[n - 1]) {
        double avg = 0.0;
        for (int i = start; i < start + size; ++i) avg += a(i, i);
        avg /= size;
        for (int i = start; i < start + size; ++i) out(i, i) = avg;
        start += size;
      }
      return out;
    }
    case FiltrationKind::tensor: {
      if (n == levels_) return a;
      const int m = 1 << (levels_ - n);
      const int r = 1 << n;
      Matrix reduced = Matrix::Zero(r, r);
      for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j) {
          double s = 0.0;
          for (int c = 0; c < m; ++c) s += a(i * m + c, j * m + c);
          reduced(i, j) = s / m;
        }
      return Eigen::kroneckerProduct(reduced, Matrix::Identity(m, m)).eval();
    }
    case FiltrationKind::pinching: {
      Matrix out = Matrix::Zero(d, d);
      int start = 0;
      for (int size : blocks_[n - 1]) {
        out.block(start, start, size, size) = a.block(start, start, size, size);
        start += size;
      }
      return out;
    }
    case FiltrationKind::generic: {
      const Matrix& q = generic_bases_[n - 1];
      return unvec(q * (q.transpose() * vec(a)), d);
    }
  }
  return a;
}

std::vector<Matrix> Filtration::spanning_set(int n) const {
  check_level(n);
  if (n == 0) n = 1;
  const int d = dim_;
  std::vector<Matrix> out;
  switch (kind_) {
    case FiltrationKind::dyadic: {
      int start = 0;
      for (int size : blocks_[n - 1]) {
        Matrix e = Matrix::Zero(d, d);
        for (int i = start; i < start + size; ++i) e(i, i) = 1.0;
        out.push_back(e);
        start += size;
      }
      break;
    }
    case FiltrationKind::tensor: {
      const int m = 1 << (levels_ - n);
      const int r = 1 << n;
      for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j) {
          Matrix unit = Matrix::Zero(r, r);
          unit(i, j) = 1.0;
          out.push_back(Eigen::kroneckerProduct(unit, Matrix::Identity(m, m)).eval());
        }
      break;
    }
    case FiltrationKind::pinching: {
      int start = 0;
      for (int size : blocks_[n - 1]) {
        for (int i = start; i < start + size; ++i)
          for (int j = start; j < start + size; ++j) {
            Matrix unit = Matrix::Zero(d, d);
            unit(i, j) = 1.0;
            out.push_back(unit);
          }
        start += size;
      }
      break;
    }
    case FiltrationKind::generic:
      out = generic_spans_[n - 1];
      break;
  }
  return out;
}

std::vector<Matrix> Filtration::relative_commutant(int n) const {
  check_level(n);
  if (n == 0) n = 1;
  const int d = dim_;
  switch (kind_) {
    case FiltrationKind::dyadic:
      return spanning_set(std::max(n - 1, 1));
    case FiltrationKind::pinching: {
      std::vector<Matrix> out;
      int start = 0;
      for (int size : blocks_[n - 1]) {
        Matrix e = Matrix::Zero(d, d);
        for (int i = start; i < start + size; ++i) e(i, i) = 1.0;
        out.push_back(e);
        start += size;
      }
      return out;
    }
    default:
      return {identity(d)};
  }
}

// ---------------------------------------------------------------- martingales

Martingale::Martingale(FiltrationPtr f, std::vector<Matrix> x) : f_(std::move(f)) {
  if (!f_) throw Error(Errc::bad_params, "martingale without filtration");
  const int N = f_->levels();
  const int d = f_->dim();
  if (static_cast<int>(x.size()) != N)
    throw Error(Errc::bad_params, "martingale needs exactly one element per level");
  x_.reserve(N + 1);
  x_.push_back(Matrix::Zero(d, d));
  for (auto& m : x) {
    if (m.rows() != d || m.cols() != d)
      throw Error(Errc::bad_params, "martingale element has the wrong shape");
    x_.push_back(std::move(m));
  }
  dx_.resize(N + 1);
  dx_[0] = Matrix::Zero(d, d);
  for (int n = 1; n <= N; ++n) dx_[n] = x_[n] - x_[n - 1];
  double scale = 1.0;
  for (const auto& m : x_) scale = std::max(scale, m.cwiseAbs().maxCoeff());
  if (martingale_residual() > 1e-8 * scale)
    throw Error(Errc::bad_params, "sequence is not a martingale for this filtration");
}

Martingale Martingale::from_final(FiltrationPtr f, const Matrix& final_element) {
  std::vector<Matrix> x;
  const int N = f->levels();
  for (int n = 1; n <= N; ++n) x.push_back(f->condexp(n, final_element));
  return Martingale(std::move(f), std::move(x));
}

Martingale Martingale::from_differences(FiltrationPtr f, const std::vector<Matrix>& diffs) {
  std::vector<Matrix> x;
  if (diffs.empty()) throw Error(Errc::bad_params, "no differences");
  Matrix acc = Matrix::Zero(diffs.front().rows(), diffs.front().cols());
  for (const auto& dd : diffs) {
    acc += dd;
    x.push_back(acc);
  }
  return Martingale(std::move(f), std::move(x));
}

Martingale Martingale::zero(FiltrationPtr f) {
  const int d = f->dim();
  return Martingale(f, std::vector<Matrix>(f->levels(), Matrix::Zero(d, d)));
}

const Matrix& Martingale::at(int n) const {
  if (n < 0 || n > levels()) throw Error(Errc::index_out_of_range, "martingale level out of range");
  return x_[n];
}

const Matrix& Martingale::diff(int n) const {
  if (n < 1 || n > levels()) throw Error(Errc::index_out_of_range, "difference index out of range");
  return dx_[n];
}

bool Martingale::self_adjoint(double tol) const {
  for (const auto& m : x_)
    if (!is_self_adjoint(m, tol * (1.0 + m.cwiseAbs().maxCoeff()))) return false;
  return true;
}

double Martingale::martingale_residual() const {
  double r = 0.0;
  const int N = levels();
  for (int n = 1; n <= N; ++n) {
    r = std::max(r, (f_->condexp(n, x_[N]) - x_[n]).cwiseAbs().maxCoeff());
    if (n >= 2) r = std::max(r, f_->condexp(n - 1, dx_[n]).cwiseAbs().maxCoeff());
  }
  return r;
}

Martingale Martingale::scaled(double c) const {
  std::vector<Matrix> x(x_.begin() + 1, x_.end());
  for (auto& m : x) m *= c;
  return Martingale(f_, std::move(x));
}

Martingale Martingale::adjoint() const {
  std::vector<Matrix> x;
  for (std::size_t n = 1; n < x_.size(); ++n) x.push_back(x_[n].transpose());
  return Martingale(f_, std::move(x));
}

double AdaptedSequence::adaptedness_residual() const {
  double r = 0.0;
  for (int n = 1; n <= levels(); ++n)
    r = std::max(r, (filtration->condexp(n, terms[n - 1]) - terms[n - 1]).cwiseAbs().maxCoeff());
  return r;
}

Martingale random_martingale(const FiltrationPtr& f, std::uint64_t seed, Law law,
                             Normalize normalize) {
  std::mt19937_64 rng(seed);
  Matrix g = random_symmetric(f->dim(), rng, law);
  Matrix xN = f->condexp(f->levels(), g);
  xN = 0.5 * (xN + xN.transpose());
  double scale = 1.0;
  if (normalize == Normalize::l1) scale = lp_norm(xN, 1.0);
  if (normalize == Normalize::linf) scale = lp_norm(xN, kInf);
  if (normalize != Normalize::none && scale > 0) xN /= scale;
  return Martingale::from_final(f, xN);
}

// ---------------------------------------------------------------- transforms

namespace {

void assert_very_weak(const Martingale& x, const Martingale& y) {
  for (int n = 1; n <= x.levels(); ++n) {
    const Matrix& dx = x.diff(n);
    const Matrix& dy = y.diff(n);
    Matrix gap = dx * dx - dy * dy;
    gap = 0.5 * (gap + gap.transpose());
    const double scale = 1.0 + dx.cwiseAbs().maxCoeff() * dx.cwiseAbs().maxCoeff();
    if (min_eigenvalue(gap) < -1e-9 * scale)
      throw Error(Errc::generator_failure, "transform violates dy^2 <= dx^2 at level " +
                                               std::to_string(n));
  }
}

}  // namespace

MartingalePair transform_pair(const Martingale& x, const std::vector<double>& symbols) {
  if (static_cast<int>(symbols.size()) != x.levels())
    throw Error(Errc::bad_params, "need one transform symbol per level");
  if (!x.self_adjoint()) throw Error(Errc::not_self_adjoint, "transform of a non-self-adjoint martingale");
  std::vector<Matrix> dy;
  for (int n = 1; n <= x.levels(); ++n) {
    const double e = symbols[n - 1];
    if (!(std::abs(e) <= 1.0))
      throw Error(Errc::symbol_too_large, "symbol " + std::to_string(e) + " exceeds 1 in modulus");
    dy.push_back(e * x.diff(n));
  }
  Martingale y = Martingale::from_differences(x.filtration_ptr(), dy);
  return {x, std::move(y)};
}

MartingalePair transform_pair(const Martingale& x, const std::vector<Matrix>& symbols) {
  if (static_cast<int>(symbols.size()) != x.levels())
    throw Error(Errc::bad_params, "need one transform symbol per level");
  if (!x.self_adjoint()) throw Error(Errc::not_self_adjoint, "transform of a non-self-adjoint martingale");
  const Filtration& f = x.filtration();
  std::vector<Matrix> dy;
  for (int n = 1; n <= x.levels(); ++n) {
    const Matrix& xi = symbols[n - 1];
    const double scale = 1.0 + xi.cwiseAbs().maxCoeff();
    if (!is_self_adjoint(xi, 1e-12 * scale))
      throw Error(Errc::not_self_adjoint, "element symbol is not self-adjoint");
    if (op_norm(xi) > 1.0 + 1e-12)
      throw Error(Errc::symbol_too_large, "element symbol is not a contraction");
    if ((f.condexp(n - 1, xi) - xi).cwiseAbs().maxCoeff() > 1e-10 * scale)
      throw Error(Errc::symbol_not_adapted, "symbol at level " + std::to_string(n) +
                                                " is not in the previous subalgebra");
    for (const auto& b : f.spanning_set(n))
      if ((xi * b - b * xi).cwiseAbs().maxCoeff() > 1e-10 * scale)
        throw Error(Errc::symbol_not_commuting,
                    "symbol at level " + std::to_string(n) + " does not commute with M_n");
    Matrix d = xi * x.diff(n);
    dy.push_back(0.5 * (d + d.transpose()));
  }
  Martingale y = Martingale::from_differences(x.filtration_ptr(), dy);
  assert_very_weak(x, y);
  return {x, std::move(y)};
}

// ---------------------------------------------------------------- subordination

SubordinationCertificate check_subordination(const Martingale& x, const Martingale& y,
                                             SubordinationMode mode, int samples,
                                             std::uint64_t seed, const CandidateSets& candidates) {
  if (!same_filtration(x.filtration(), y.filtration()))
    throw Error(Errc::filtration_mismatch, "martingales live on different filtrations");
  if (!x.self_adjoint() || !y.self_adjoint())
    throw Error(Errc::not_self_adjoint, "subordination is defined for self-adjoint martingales");
  const Filtration& f = x.filtration();
  const int d = f.dim();
  std::mt19937_64 rng(seed);
  SubordinationCertificate cert{mode, true, kInf, 0, -1, 0};
  double worst_scaled = kInf;

  auto record = [&](double margin, double scale, int n, int sample) {
    const double scaled = margin / scale;
    if (scaled < worst_scaled) {
      worst_scaled = scaled;
      cert.worst_margin = margin;
      cert.witness_level = n;
      cert.witness_sample = sample;
    }
    if (margin < -1e-8 * scale) cert.holds = false;
  };

  for (int n = 1; n <= x.levels(); ++n) {
    const Matrix& dx = x.diff(n);
    const Matrix& dy = y.diff(n);
    const double nx = dx.cwiseAbs().maxCoeff();
    const double scale = 1.0 + nx * nx;
    if (mode == SubordinationMode::very_weak) {
      record(min_eigenvalue(dx * dx - dy * dy), scale, n, -1);
      continue;
    }
    if (mode == SubordinationMode::weak_sampled) {
      auto test = [&](const Matrix& r, int sample) {
        Matrix lhs = r * dy * r * dy * r;
        Matrix rhs = r * dx * r * dx * r;
        Matrix gap = rhs - lhs;
        record(min_eigenvalue(0.5 * (gap + gap.transpose())), scale, n, sample);
      };
      test(Matrix::Zero(d, d), -1);
      test(identity(d), -1);
      if (static_cast<int>(candidates.size()) >= n)
        for (const auto& r : candidates[n - 1]) test(r, -1);
      for (int s = 0; s < samples; ++s) {
        Matrix g = f.condexp(n - 1, random_symmetric(d, rng, Law::gaussian));
        test(positive_part_projection(0.5 * (g + g.transpose())), s);
      }
      continue;
    }
    // ds_sampled: trace conditions for R in M_n and for R, S in M_n with R + S in M_{n-1}.
    for (int s = 0; s < samples; ++s) {
      Matrix gn = f.condexp(n, random_symmetric(d, rng, Law::gaussian));
      Matrix r = positive_part_projection(0.5 * (gn + gn.transpose()));
      record(normalized_trace(r * dx * r * dx * r) - normalized_trace(r * dy * r * dy * r), scale,
             n, s);
      Matrix gm = f.condexp(n - 1, random_symmetric(d, rng, Law::gaussian));
      Matrix t = positive_part_projection(0.5 * (gm + gm.transpose()));
      Matrix h = f.condexp(n, random_symmetric(d, rng, Law::gaussian));
      Matrix thn = t * h * t;
      Matrix r2 = positive_part_projection(0.5 * (thn + thn.transpose()));
      Matrix s2 = t - r2;
      record(normalized_trace(r2 * dx * s2 * dx * r2) - normalized_trace(r2 * dy * s2 * dy * r2),
             scale, n, s);
    }
  }
  cert.samples = samples;
  if (!std::isfinite(cert.worst_margin)) cert.worst_margin = 0.0;
  return cert;
}

}  // namespace ncmart
