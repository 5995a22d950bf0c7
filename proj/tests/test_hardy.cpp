#include <gtest/gtest.h>

#include <cmath>

#include "ncmart/decompose.hpp"
#include "ncmart/hardy.hpp"
#include "support.hpp"

using namespace ncmart;
using namespace ncmart::testing;

TEST(SquareFunctions, DX4) {
  Martingale x = dx4();
  const Matrix s = diag({5, 5, 0.25, 0.25});
  EXPECT_LE(max_abs(square_fn_sq(x, Side::column) - s), 1e-12);
  EXPECT_LE(max_abs(cond_square_fn_sq(x, Side::column) - s), 1e-12);
  EXPECT_LE(max_abs(square_fn(x, Side::row) - diag({std::sqrt(5.0), std::sqrt(5.0), 0.5, 0.5})), 1e-12);
  EXPECT_NEAR(hardy_norm(x, HardyNorm::Hpc, 2), std::sqrt(2.625), 1e-12);
  EXPECT_NEAR(hardy_norm(x, HardyNorm::hpc, 2), std::sqrt(2.625), 1e-12);
  TripleDecomposition t = triple(x, x);
  Matrix sz = sigma_c(t.zeta, Side::column);
  EXPECT_LE(max_abs(sz * sz - diag({2, 2, 0, 0})), 1e-12);
}

TEST(SquareFunctions, UptoAndRange) {
  Martingale x = dx4();
  EXPECT_LE(max_abs(square_fn_sq(x, Side::column, 1) - diag({1, 1, 0.25, 0.25})), 1e-12);
  EXPECT_THROW(square_fn(x, Side::column, 3), Error);
  EXPECT_THROW(hardy_norm(x, HardyNorm::hpc, 0), Error);
}

TEST(SquareFunctions, SigmaOfDifferencesIsConditionedSquare) {
  for (const auto& f : small_filtrations()) {
    Martingale x = random_martingale(f, 17);
    AdaptedSequence d{f, {}};
    for (int n = 1; n <= x.levels(); ++n) d.terms.push_back(x.diff(n));
    EXPECT_LE(max_abs(sigma_c(d, Side::column) - cond_square_fn(x, Side::column)), 1e-10);
    EXPECT_LE(max_abs(sigma_c(d, Side::row) - cond_square_fn(x, Side::row)), 1e-10);
  }
}

TEST(SquareFunctions, L2Identities) {
  for (const auto& f : small_filtrations())
    for (int s = 0; s < 20; ++s) {
      Martingale x = random_martingale(f, 100 + s, s % 2 ? Law::uniform : Law::gaussian);
      const double x2 = lp_norm(x.final(), 2);
      for (HardyNorm h : {HardyNorm::hpc, HardyNorm::hpr, HardyNorm::Hpc, HardyNorm::Hpr, HardyNorm::hpd})
        EXPECT_NEAR(hardy_norm(x, h, 2), x2, 1e-9 * (1 + x2));
    }
}

TEST(SeqWeak, Examples) {
  AdaptedSequence s{Filtration::tensor(1), {diag({2, 0}), diag({1, 1})}};
  EXPECT_NEAR(seq_weak_norm(s, SeqWeak::diag_amplified), 1.5, 1e-12);
  AdaptedSequence z{Filtration::tensor(1), {}};
  EXPECT_EQ(seq_weak_norm(z, SeqWeak::diag_amplified), 0.0);
}

TEST(Mixed, SinglePieceAndMismatch) {
  Martingale x = dx4();
  MixedParts col{x, std::nullopt, std::nullopt};
  EXPECT_NEAR(mixed_upper_bound(x, col, MixedNorm::Hp, 2), std::sqrt(2.625), 1e-12);
  EXPECT_NEAR(mixed_upper_bound(x, col, MixedNorm::hp, 2), std::sqrt(2.625), 1e-12);
  MixedParts half{x.scaled(0.5), std::nullopt, std::nullopt};
  try {
    mixed_upper_bound(x, half, MixedNorm::hp, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::reconstruction_mismatch);
  }
  MixedParts diagp{std::nullopt, std::nullopt, x};
  EXPECT_THROW(mixed_upper_bound(x, diagp, MixedNorm::Hp, 1), Error);
}

TEST(WeightFunctional, Examples) {
  for (const auto& f : small_filtrations()) {
    Martingale x = random_martingale(f, 3);
    WeightFunctional w = weight_functional(x, 2, 0);
    EXPECT_NEAR(w.value, lp_norm(x.final(), 2), 1e-9);
  }
  Martingale x = dx4();
  WeightFunctional w = weight_functional(x, 1.5, 1e-9);
  const double sc = lp_norm(cond_square_fn(x, Side::column), 1.5);
  EXPECT_LE(w.value * w.value, 4.0 / 3.0 * std::pow(sc, 1.5) + 1e-6);
  WeightFunctional z = weight_functional(Martingale::zero(Filtration::tensor(2)), 1.5, 1e-6);
  EXPECT_NEAR(z.value, 0.0, 1e-12);
  EXPECT_THROW(weight_functional(x, 2.5, 1e-6), Error);
}

TEST(Wang, InequalityOnRandomMartingales) {
  int count = 0;
  std::mt19937_64 g(2024);
  std::uniform_real_distribution<double> pu(1.0, 2.0), expo(-3, 3);
  for (const auto& f : small_filtrations())
    for (int s = 0; s < 170; ++s, ++count) {
      const double p = s % 10 == 0 ? 2.0 : pu(g);
      Martingale x = random_martingale(f, 1000 + s, s % 2 ? Law::uniform : Law::gaussian).scaled(std::exp2(expo(g)));
      const double hpc = hardy_norm(x, HardyNorm::hpc, p);
      const double c = std::sqrt(2 / p);
      EXPECT_LE(lp_norm(x.final(), p), c * hpc * (1 + 1e-9) + 1e-300);
      EXPECT_LE(hardy_norm(x, HardyNorm::Hpc, p), c * hpc * (1 + 1e-9) + 1e-300);
    }
  EXPECT_GE(count, 500);
}

TEST(Hh, DiagonalDecompositionBound) {
  std::mt19937_64 g(8);
  std::uniform_real_distribution<double> pu(1.0, 2.0);
  for (const auto& f : small_filtrations())
    for (int s = 0; s < 20; ++s) {
      const double p = pu(g);
      Martingale x = random_martingale(f, 300 + s);
      DavisTriple w = davis_triple(x, x);
      MixedParts parts{w.column, w.row, w.diagonal};
      const double c = std::sqrt(2 / p);
      EXPECT_LE(lp_norm(x.final(), p), c * mixed_upper_bound(x, parts, MixedNorm::hp, p) * (1 + 1e-9));
    }
}

TEST(IntegralLemma, MatchesSimpsonQuadrature) {
  std::mt19937_64 g(4);
  for (double p : {1.0, 1.3, 1.7, 2.0})
    for (int r = 0; r < 5; ++r) {
      const int d = 6;
      Matrix G = gaussian(d, g), H = gaussian(d, g);
      Matrix a = G * G.transpose() / d + 0.1 * identity(d);
      Matrix b = H * H.transpose() / d;
      auto f = [p](double t) { return std::pow(std::max(t, 0.0), p / 2); };
      auto df = [p](double t) { return p / 2 * std::pow(std::max(t, 1e-300), p / 2 - 1); };
      const double lhs = normalized_trace(apply_function(Matrix(a + b), f) - apply_function(a, f));
      const int m = 2000;
      double rhs = 0.0;
      for (int i = 0; i <= m; ++i) {
        const double t = static_cast<double>(i) / m;
        const double w = (i == 0 || i == m) ? 1 : (i % 2 ? 4 : 2);
        rhs += w * normalized_trace(apply_function(Matrix(a + t * b), df) * b);
      }
      rhs /= 3.0 * m;
      EXPECT_NEAR(lhs, rhs, 1e-8 * std::abs(lhs));
    }
}
