#include "ncmart/decompose.hpp"

#include <cmath>
#include <string>

namespace ncmart {

namespace {

void require_same(const Martingale& x, const Martingale& y) {
  if (x.filtration_ptr() != y.filtration_ptr() &&
      (x.dim() != y.dim() || x.levels() != y.levels() ||
       x.filtration().kind() != y.filtration().kind()))
    throw Error(Errc::filtration_mismatch, "martingales live on different filtrations");
}

void require_grid(const Martingale& y, const ProjectionGrid& g) {
  if (g.levels() != y.levels() || g.dim() != y.dim())
    throw Error(Errc::filtration_mismatch, "projection grid does not match the martingale");
}

Matrix centered(const Filtration& f, int n, const Matrix& a) {
  return n >= 2 ? Matrix(a - f.condexp(n - 1, a)) : a;
}

/// chi_(t, inf)(|a|) for self-adjoint a, with the same tie tolerance as `distribution`.
Matrix tail_projection(const Matrix& a, double t) {
  Eigensystem es = eigh(a);
  const int d = static_cast<int>(a.rows());
  const double thr = t + 1e-12 * (1.0 + t);
  Matrix p = Matrix::Zero(d, d);
  for (int j = 0; j < d; ++j)
    if (std::abs(es.values(j)) > thr) p += es.vectors.col(j) * es.vectors.col(j).transpose();
  return p;
}

}  // namespace

GundyDecomposition gundy(const Martingale& y, const CuculescuFamily& q, GundyForm form) {
  const int N = y.levels();
  if (static_cast<int>(q.q.size()) != N + 1)
    throw Error(Errc::filtration_mismatch, "Cuculescu family has the wrong number of levels");
  const Filtration& f = y.filtration();
  const Matrix id = identity(y.dim());
  std::vector<Matrix> da, db, dg, du;
  for (int n = 1; n <= N; ++n) {
    const Matrix& dy = y.diff(n);
    const Matrix& qp = q.q[n - 1];
    const Matrix& qn = q.q[n];
    Matrix a = centered(f, n, qp * dy * qn);
    Matrix b = centered(f, n, qp * dy * (qp - qn));
    Matrix g = dy * (id - qp);
    Matrix u = (id - qp) * dy * qp;
    if (form == GundyForm::symmetrized) {
      Matrix gs = 0.5 * (g + u.transpose());
      a = 0.5 * (a + a.transpose()).eval();
      b = 0.5 * (b + b.transpose()).eval();
      u = gs.transpose();
      g = gs;
    }
    da.push_back(a);
    db.push_back(b);
    dg.push_back(g);
    du.push_back(u);
  }
  const FiltrationPtr& fp = y.filtration_ptr();
  return {q.lambda, Martingale::from_differences(fp, da), Martingale::from_differences(fp, db),
          Martingale::from_differences(fp, dg), Martingale::from_differences(fp, du)};
}

GundyDecomposition gundy(const Martingale& x, const Martingale& y, double lambda, GundyForm form) {
  require_same(x, y);
  return gundy(y, cuculescu_projections(x, lambda), form);
}

TripleDecomposition triple(const Martingale& y, const ProjectionGrid& g) {
  require_grid(y, g);
  const int N = y.levels();
  const int d = y.dim();
  const int K = g.k_max();
  TripleDecomposition t;
  for (auto* s : {&t.eta, &t.zeta, &t.xi}) s->filtration = y.filtration_ptr();
  t.eta.terms.push_back(y.at(1));
  t.zeta.terms.push_back(Matrix::Zero(d, d));
  t.xi.terms.push_back(Matrix::Zero(d, d));
  for (int n = 2; n <= N; ++n) {
    const Matrix& dy = y.diff(n);
    Matrix eta = Matrix::Zero(d, d), zeta = Matrix::Zero(d, d), xi = Matrix::Zero(d, d);
    for (int j = 0; j <= K; ++j) zeta += g.e(j, n) * dy * g.p(j, n - 1);
    for (int i = 1; i <= K; ++i) {
      Matrix cross = g.p(i, n - 1) * g.p(i, n);
      Matrix tail = dy * g.e(i - 1, n - 1);
      xi += cross * tail;
      eta += (g.p(i, n) - cross) * tail;
    }
    t.eta.terms.push_back(eta);
    t.zeta.terms.push_back(zeta);
    t.xi.terms.push_back(xi);
  }
  return t;
}

TripleDecomposition triple(const Martingale& x, const Martingale& y) {
  require_same(x, y);
  return triple(y, projection_grid(x));
}

SquareDecomposition square_pair(const Martingale& y, const ProjectionGrid& g) {
  require_grid(y, g);
  const int N = y.levels();
  const int d = y.dim();
  std::vector<Matrix> dc, dr;
  for (int n = 1; n <= N; ++n) {
    const int m = n >= 2 ? n - 1 : 1;
    const Matrix& dy = y.diff(n);
    Matrix c = Matrix::Zero(d, d);
    for (int j = 0; j <= g.k_max(); ++j) c += g.e(j, m) * dy * g.p(j, m);
    dr.push_back(dy - c);
    dc.push_back(std::move(c));
  }
  const FiltrationPtr& fp = y.filtration_ptr();
  return {Martingale::from_differences(fp, dc), Martingale::from_differences(fp, dr)};
}

SquareDecomposition square_pair(const Martingale& x, const Martingale& y) {
  require_same(x, y);
  return square_pair(y, projection_grid(x));
}

DavisTriple davis_triple(const Martingale& y, const TripleDecomposition& t) {
  const Filtration& f = y.filtration();
  std::vector<Matrix> dd, dc, dr;
  for (int n = 1; n <= y.levels(); ++n) {
    dd.push_back(centered(f, n, t.eta[n]));
    dc.push_back(centered(f, n, t.zeta[n]));
    dr.push_back(centered(f, n, t.xi[n]));
  }
  const FiltrationPtr& fp = y.filtration_ptr();
  return {Martingale::from_differences(fp, dd), Martingale::from_differences(fp, dc),
          Martingale::from_differences(fp, dr)};
}

DavisTriple davis_triple(const Martingale& y, const ProjectionGrid& g) {
  return davis_triple(y, triple(y, g));
}

DavisTriple davis_triple(const Martingale& x, const Martingale& y) {
  require_same(x, y);
  return davis_triple(y, projection_grid(x));
}

Matrix triangular_truncation(const Matrix& a, const std::vector<Matrix>& P) {
  for (std::size_t i = 0; i < P.size(); ++i)
    for (std::size_t j = i + 1; j < P.size(); ++j)
      if ((P[i] * P[j]).cwiseAbs().maxCoeff() > 1e-8)
        throw Error(Errc::not_disjoint, "projections " + std::to_string(i) + " and " +
                                            std::to_string(j) + " overlap");
  Matrix out = Matrix::Zero(a.rows(), a.cols());
  Matrix head = Matrix::Zero(a.rows(), a.rows());
  for (const auto& p : P) {
    head += p;
    out += head * a * p;
  }
  return out;
}

EtaFactorization eta_factorization(const Martingale& x, const Martingale& y,
                                   const ProjectionGrid& g, int k) {
  require_same(x, y);
  require_grid(y, g);
  if (k < 0 || k > g.k_max())
    throw Error(Errc::index_out_of_range, "eta factorization index outside 0..k_max");
  const int N = y.levels();
  const int d = y.dim();
  const int K = g.k_max();
  const Matrix id = identity(d);
  EtaFactorization ef;
  ef.k = k;
  ef.U.push_back(id);
  ef.V.push_back(y.at(1));
  ef.pi_full.push_back(id);
  ef.pi_k.push_back(tail_projection(x.at(1), std::ldexp(1.0, k)));
  ef.right.emplace_back();
  ef.left.emplace_back();
  for (int n = 2; n <= N; ++n) {
    const Matrix& dy = y.diff(n);
    Matrix U = Matrix::Zero(d, d), V = Matrix::Zero(d, d);
    Matrix full = Matrix::Zero(d, d), tail = Matrix::Zero(d, d);
    std::vector<Matrix> rs(K + 1, Matrix::Zero(d, d)), ls(K + 1, Matrix::Zero(d, d));
    for (int i = 1; i <= K; ++i) {
      Matrix D = g.p(i, n) - g.p(i, n - 1) * g.p(i, n);
      rs[i] = support(D, SupportSide::right);
      ls[i] = support(D, SupportSide::left);
      U += D;
      V += rs[i] * dy * g.e(i - 1, n - 1);
      full += rs[i];
      if (i >= k + 1) tail += rs[i];
    }
    ef.U.push_back(U);
    ef.V.push_back(V);
    ef.pi_full.push_back(full);
    ef.pi_k.push_back(tail);
    ef.right.push_back(std::move(rs));
    ef.left.push_back(std::move(ls));
  }
  return ef;
}

EtaFactorization eta_factorization(const Martingale& x, const Martingale& y, int k) {
  return eta_factorization(x, y, projection_grid(x), k);
}

}  // namespace ncmart
