#include <gtest/gtest.h>

#include <cmath>

#include "ncmart/cuculescu.hpp"
#include "support.hpp"

using namespace ncmart;
using namespace ncmart::testing;

namespace {

/// Literal recursion q_n = q_{n-1} chi_[-l,l](q_{n-1} x_n q_{n-1}), written against the algebra layer only.
std::vector<Matrix> literal_cuculescu(const Martingale& x, double lambda) {
  std::vector<Matrix> q{identity(x.dim())};
  for (int n = 1; n <= x.levels(); ++n) {
    const Matrix& p = q.back();
    Matrix c = p * x.at(n) * p;
    c = 0.5 * (c + c.transpose());
    q.push_back(p * spectral_projection(c, -lambda, lambda));
  }
  return q;
}

std::vector<Martingale> sample_martingales(int count) {
  std::vector<Martingale> out;
  std::mt19937_64 g(77);
  std::uniform_real_distribution<double> expo(-4, 4);
  for (const auto& f : small_filtrations())
    for (int s = 0; s < count; ++s)
      out.push_back(random_martingale(f, 1000 + s, s % 2 ? Law::uniform : Law::gaussian).scaled(std::exp2(expo(g))));
  return out;
}

double tr(const Matrix& a) { return normalized_trace(a); }

}  // namespace

TEST(Cuculescu, DX4AtLambdaTwo) {
  CuculescuFamily f = cuculescu_projections(dx4(), 2.0);
  EXPECT_LE(max_abs(f.q[1] - identity(4)), 1e-12);
  EXPECT_LE(max_abs(f.q[2] - diag({0, 1, 1, 1})), 1e-12);
  const Matrix x2 = dx4().final();
  EXPECT_NEAR(1 - tr(f.q[2]), 0.25, 1e-12);
  EXPECT_NEAR(tr((identity(4) - f.q[2]) * abs(x2)) / 2, 0.375, 1e-12);
}

TEST(Cuculescu, LargeLambdaGivesIdentity) {
  for (const auto& x : sample_martingales(5)) {
    double m = 0;
    for (int n = 1; n <= x.levels(); ++n) m = std::max(m, op_norm(x.at(n)));
    CuculescuFamily f = cuculescu_projections(x, m * (1 + 1e-9));
    for (const auto& q : f.q) EXPECT_LE(max_abs(q - identity(x.dim())), 1e-10);
  }
}

TEST(Cuculescu, MatchesLiteralRecursion) {
  for (const auto& x : sample_martingales(5))
    for (double lam : {0.25, 1.0, 3.0}) {
      CuculescuFamily f = cuculescu_projections(x, lam);
      auto lit = literal_cuculescu(x, lam);
      for (int n = 0; n <= x.levels(); ++n) EXPECT_LE(max_abs(f.q[n] - lit[n]), 1e-8);
    }
}

TEST(Cuculescu, Properties) {
  for (const auto& x : sample_martingales(10))
    for (double lam : {0.5, 1.0, 2.0, 8.0}) {
      CuculescuFamily f = cuculescu_projections(x, lam);
      const Filtration& F = x.filtration();
      for (int n = 1; n <= x.levels(); ++n) {
        const Matrix& q = f.q[n];
        const Matrix& qp = f.q[n - 1];
        EXPECT_LE(max_abs(F.condexp(n, q) - q), 1e-10);
        EXPECT_GE(min_eigenvalue(qp - q), -1e-9);
        Matrix m = qp * x.at(n) * qp;
        EXPECT_LE(max_abs(q * m - m * q), 1e-8 * (1 + op_norm(x.at(n))));
        EXPECT_LE(op_norm(q * x.at(n) * q), lam * (1 + 1e-10) + 1e-10);
      }
      const Matrix& qN = f.q[x.levels()];
      const Matrix rest = identity(x.dim()) - qN;
      EXPECT_LE(1 - tr(qN), tr(rest * abs(x.final())) / lam + 1e-9);
    }
}

TEST(Cuculescu, StabilizationIndex) {
  EXPECT_EQ(stabilization_index(dx4()), 2);
  auto f = Filtration::tensor(2);
  EXPECT_EQ(stabilization_index(Martingale::from_final(f, 0.5 * identity(4))), 0);
  EXPECT_EQ(stabilization_index(Martingale::from_final(f, 4.0 * identity(4))), 2);
  EXPECT_EQ(stabilization_index(Martingale::from_final(f, 4.5 * identity(4))), 3);
}

TEST(Grid, DX4Values) {
  ProjectionGrid g = projection_grid(dx4());
  EXPECT_EQ(g.k_max(), 2);
  EXPECT_LE(max_abs(g.e(0, 2) - diag({0, 1, 1, 1})), 1e-12);
  EXPECT_LE(max_abs(g.e(1, 2) - diag({0, 1, 1, 1})), 1e-12);
  EXPECT_LE(max_abs(g.p(0, 2) - diag({0, 1, 1, 1})), 1e-12);
  EXPECT_LE(max_abs(g.p(1, 2)), 1e-12);
  EXPECT_LE(max_abs(g.p(2, 2) - diag({1, 0, 0, 0})), 1e-12);
  EXPECT_LE(max_abs(g.p(0, 1) - identity(4)), 1e-12);
  EXPECT_LE(max_abs(g.q(1, 2) - diag({0, 1, 1, 1})), 1e-12);
}

TEST(Grid, ContractionIsTrivial) {
  auto x = random_martingale(Filtration::tensor(3), 4, Law::uniform, Normalize::linf);
  ProjectionGrid g = projection_grid(x);
  EXPECT_EQ(g.k_max(), 0);
  for (int n = 0; n <= 3; ++n) {
    EXPECT_LE(max_abs(g.e(0, n) - identity(8)), 1e-12);
    EXPECT_LE(max_abs(g.p(0, n) - identity(8)), 1e-12);
  }
  auto z = Martingale::zero(Filtration::dyadic(3, 3));
  ProjectionGrid gz = projection_grid(z);
  EXPECT_EQ(gz.k_max(), 0);
  for (int n = 0; n <= 3; ++n) EXPECT_LE(max_abs(gz.p(0, n) - identity(8)), 0.0);
}

TEST(Grid, Invariants) {
  for (const auto& x : sample_martingales(10)) {
    ProjectionGrid g = projection_grid(x);
    const int N = x.levels(), K = g.k_max();
    const Matrix id = identity(x.dim());
    for (int n = 1; n <= N; ++n) {
      Matrix sum = Matrix::Zero(x.dim(), x.dim());
      for (int k = 0; k <= K; ++k) {
        const Matrix& p = g.p(k, n);
        EXPECT_LE(max_abs(p * p - p), 1e-9);
        sum += p;
      }
      EXPECT_LE(max_abs(sum - id), 1e-9);
      for (int i = g.lowest(); i <= K; ++i) {
        EXPECT_GE(min_eigenvalue(g.e(i, n) - g.e(i - 1, n)), -1e-8);
        EXPECT_GE(min_eigenvalue(g.e(i, n - 1) - g.e(i, n)), -1e-8);
        EXPECT_GE(min_eigenvalue(g.q(i, n) - g.e(i, n)), -1e-8);
        EXPECT_LE(max_abs(x.filtration().condexp(n, g.e(i, n)) - g.e(i, n)), 1e-9);
      }
      EXPECT_LE(max_abs(g.q(K, n) - id), 1e-9);
    }
    // e_{k,N} satisfies the Cuculescu tail estimate with an extra factor 2.
    for (int k = 0; k <= K; ++k)
      EXPECT_LE(1 - tr(g.e(k, N)), std::ldexp(2.0, -k) * tr((id - g.e(k, N)) * abs(x.final())) + 1e-9);
  }
}

TEST(Grid, ShiftMatchesScaledMartingale) {
  for (const auto& x : sample_martingales(3)) {
    ProjectionGrid g = projection_grid(x);
    ProjectionGrid s = g.shifted(3);
    ProjectionGrid direct = projection_grid(x.scaled(8.0));
    EXPECT_EQ(s.k_max(), direct.k_max());
    for (int k = 0; k <= s.k_max(); ++k)
      for (int n = 0; n <= x.levels(); ++n) EXPECT_LE(max_abs(s.p(k, n) - direct.p(k, n)), 1e-8);
  }
}

TEST(L2Lemmas, AllThreeParts) {
  for (const auto& x : sample_martingales(10)) {
    ProjectionGrid g = projection_grid(x);
    const int N = x.levels();
    const Matrix id = identity(x.dim());
    const Matrix ax = abs(x.final());
    const double x1 = lp_norm(x.final(), 1);
    for (int k = std::max(g.lowest(), -6); k <= g.k_max(); ++k) {
      const double lam = std::ldexp(1.0, k);
      double lhs = 0.0;
      for (int n = 1; n <= N; ++n) lhs += tr(g.q(k, n) * x.diff(n) * g.q(k, n - 1) * x.diff(n) * g.q(k, n));
      const Matrix& q = g.q(k, N);
      Matrix c = q * x.final() * q;
      EXPECT_LE(lhs, tr(c.transpose() * c) + 2 * lam * tr((id - q) * ax) + 1e-8);
    }
    for (int k = 0; k <= g.k_max(); ++k) {
      double lhs = 0.0;
      for (int n = 1; n <= N; ++n) lhs += tr(g.e(k, n) * x.diff(n) * g.e(k, n - 1) * x.diff(n) * g.e(k, n));
      const Matrix& e = g.e(k, N);
      Matrix c = e * x.final() * e;
      EXPECT_LE(lhs, std::ldexp(2.0, k) * x1 + 1e-8);
      EXPECT_LE(lhs, tr(c.transpose() * c) + 6 * std::ldexp(1.0, k) * tr((id - e) * ax) + 1e-8);
    }
  }
}

TEST(L2Lemmas, DX4PartTwo) {
  Martingale x = dx4();
  ProjectionGrid g = projection_grid(x);
  double lhs = 0.0;
  for (int n = 1; n <= 2; ++n) lhs += tr(g.e(0, n) * x.diff(n) * g.e(0, n - 1) * x.diff(n) * g.e(0, n));
  EXPECT_NEAR(lhs, 1.625, 1e-12);
  EXPECT_NEAR(2 * lp_norm(x.final(), 1), 2.5, 1e-12);
}

TEST(WeightedSums, LemPAndLast) {
  for (const auto& x : sample_martingales(10)) {
    ProjectionGrid g = projection_grid(x);
    const int N = x.levels();
    const Matrix id = identity(x.dim());
    for (double p : {1.1, 1.5, 1.9}) {
      const double xp = std::pow(lp_norm(x.final(), p), p);
      const double c1 = std::exp2((p - 1) * (p - 1)) / std::pow(std::exp2(p - 1) - 1, p);
      const double c2 = std::exp2(p * p + 1) / ((1 - std::exp2(p - 2)) * std::pow(std::exp2(p - 1) - 1, p));
      double s1 = 0.0, s2 = 0.0;
      for (int j = 0; j <= g.k_max(); ++j) {
        const Matrix& e = g.e(j, N);
        s1 += std::exp2((p - 1) * j) * tr((id - e) * abs(x.final()));
        Matrix c = e * x.final() * e;
        s2 += std::exp2((p - 2) * j) * tr(c.transpose() * c);
      }
      // Beyond k_max, e = 1: geometric tail of |x|_2^2.
      s2 += tr(x.final().transpose() * x.final()) * std::exp2((p - 2) * (g.k_max() + 1)) / (1 - std::exp2(p - 2));
      EXPECT_LE(s1, c1 * xp * (1 + 1e-7));
      EXPECT_LE(s2, c2 * xp * (1 + 1e-7));
    }
  }
}
