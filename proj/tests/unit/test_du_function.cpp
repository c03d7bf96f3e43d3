#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "minimax/du_function.hpp"

using namespace minimax;

namespace {

DuFunctionParams params(int n) {
  DuFunctionParams p;
  p.n = n;
  return p;
}

}  // namespace

TEST(DuParams, NuClosedFormMatchesDefinition) {
  const auto p = params(10);
  EXPECT_NEAR(p.nu(), 14.5 * std::exp(2.0), 1e-12);
  EXPECT_NEAR(p.nu(), 107.1413134, 1e-6);
  EXPECT_LE(std::abs(p.nu() - du_nu_from_h1(p)) / p.nu(), 1e-10);
  DuFunctionParams q{4, 3.0, 0.7};
  EXPECT_LE(std::abs(q.nu() - du_nu_from_h1(q)) / q.nu(), 1e-10);
}

TEST(DuParams, PolynomialAnchors) {
  const auto p = params(3);
  const double t = p.tau;
  EXPECT_NEAR(du_h1(t, p).value, -p.gamma * t * t, 1e-12);
  EXPECT_NEAR(du_h2(2 * t, p).value, -p.gamma, 1e-15);
  // h2(τ) = L continues the L x² suffix term.
  EXPECT_NEAR(du_h2(t, p).value, p.L, 1e-12);
}

TEST(DuParams, PolynomialDerivativesMatchDifferences) {
  const auto p = params(3);
  const double h = 1e-6;
  for (double x : {2.9, 3.7, 4.4, 5.3}) {
    for (auto f : {du_h1, du_h2}) {
      EXPECT_NEAR(f(x, p).d1, (f(x + h, p).value - f(x - h, p).value) / (2 * h), 1e-6);
      EXPECT_NEAR(f(x, p).d2, (f(x + h, p).d1 - f(x - h, p).d1) / (2 * h), 1e-6);
    }
  }
}

TEST(ClassifyRegion, Examples) {
  const auto p = params(5);
  const double t = p.tau;
  EXPECT_EQ(classify_region(Vector::Constant(5, 1e-3), p), (RegionIndex{1, 1}));
  EXPECT_EQ(classify_region(Vector::Constant(5, 4 * t), p).i, 6);
  Vector x(5);
  x << 4 * t, 1.5 * t, 0.1, 0.1, 0.1;
  EXPECT_EQ(classify_region(x, p), (RegionIndex{2, 2}));
  x << 2 * t, t, 0, 0, 0;  // 2τ counts as ≥ 2τ, τ goes to branch 1
  EXPECT_EQ(classify_region(x, p), (RegionIndex{2, 1}));
  x << 7 * t, -3, 0, 0, 0;  // clamped into [0, 6τ]
  EXPECT_EQ(classify_region(x, p), (RegionIndex{2, 1}));
}

TEST(DuEvaluation, Minimizer) {
  const auto p = params(6);
  const auto e = du_value_grad_hess(Vector::Constant(6, 4 * p.tau), p);
  EXPECT_NEAR(e.value, -6 * p.nu(), 1e-10);
  EXPECT_EQ(e.grad.norm(), 0.0);
  EXPECT_EQ((e.hess - 2 * p.L * Matrix::Identity(6, 6)).norm(), 0.0);
}

TEST(DuEvaluation, Origin) {
  const auto p = params(6);
  const auto e = du_value_grad_hess(Vector::Zero(6), p);
  EXPECT_EQ(e.value, 0.0);
  EXPECT_EQ(e.grad.norm(), 0.0);
}

TEST(DuEvaluation, HessianIsTridiagonal) {
  const auto p = params(6);
  std::mt19937_64 rng(2);
  for (int k = 0; k < 200; ++k) {
    const auto e = du_value_grad_hess(du_random_domain_point(p, rng), p);
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j)
        if (std::abs(i - j) > 1) EXPECT_EQ(e.hess(i, j), 0.0);
    EXPECT_TRUE(e.hess == e.hess.transpose());
  }
}

TEST(DuEvaluation, PartitionCoverage) {
  std::mt19937_64 rng(5);
  for (int n : {1, 2, 5, 10}) {
    const auto p = params(n);
    std::uniform_real_distribution<double> U(0, 6 * p.tau);
    for (int k = 0; k < 25000; ++k) {
      Vector x(n);
      for (int i = 0; i < n; ++i) x(i) = U(rng);
      const RegionIndex r = classify_region(x, p);
      ASSERT_GE(r.i, 1);
      ASSERT_LE(r.i, n + 1);
      ASSERT_TRUE(r.branch == 1 || r.branch == 2);
      const auto e = du_value_grad_hess(x, p, true, false);
      ASSERT_TRUE(std::isfinite(e.value) && e.grad.allFinite());
    }
  }
}

TEST(DuEvaluation, FiniteDifferencesAtDomainPoints) {
  const auto p = params(6);
  const auto problem = build_du_minimax(p, 2);
  std::mt19937_64 rng(17);
  for (int k = 0; k < 1000; ++k) {
    const Vector x = du_random_domain_point(p, rng);
    EXPECT_LE(finite_difference_check(*problem, x, Vector::Ones(2)).max_error(), 1e-5) << k;
  }
}

TEST(DuEvaluation, SecondOrderContinuityAcrossBoundaries) {
  const auto p = params(5);
  const double t = p.tau;
  std::mt19937_64 rng(23);
  std::uniform_int_distribution<int> pick(0, 4);
  std::uniform_real_distribution<double> U(0, 1);
  const double e = 1e-9;
  for (int k = 0; k < 500; ++k) {
    Vector x = du_random_domain_point(p, rng);
    const int i = pick(rng);
    for (int j = 0; j < i; ++j) x(j) = 2 * t + 4 * t * U(rng);
    for (int j = i + 1; j < 5; ++j) x(j) = t * U(rng);
    for (double b : {t, 2 * t}) {
      Vector lo = x, hi = x;
      lo(i) = b - e;
      hi(i) = b + e;
      const auto a = du_value_grad_hess(lo, p), c = du_value_grad_hess(hi, p);
      // Allow for the change over the 2e-wide gap itself.
      EXPECT_LE(std::abs(a.value - c.value), 1e-8 * (1 + std::abs(a.value)) + 2 * e * a.grad.norm());
      EXPECT_LE((a.grad - c.grad).norm(), 1e-6 * (1 + a.grad.norm()));
      EXPECT_LE((a.hess - c.hess).norm(), 1e-6 * (1 + a.hess.norm()));
    }
  }
}

TEST(DuEvaluation, StationaryPointCatalog) {
  for (int n : {1, 3, 10}) {
    const auto p = params(n);
    const auto pts = du_stationary_points(p);
    ASSERT_EQ(static_cast<int>(pts.size()), n + 1);
    for (size_t k = 0; k < pts.size(); ++k) {
      const auto e = du_value_grad_hess(pts[k], p);
      EXPECT_LE(e.grad.norm(), 1e-8);
      if (k + 1 < pts.size()) {
        EXPECT_LE(min_eigenvalue(e.hess), -p.gamma) << "saddle " << k;
      } else {
        EXPECT_EQ((e.hess - 2 * p.L * Matrix::Identity(n, n)).norm(), 0.0);
      }
    }
  }
}

TEST(DuProblem, Structure) {
  const auto p = params(4);
  const auto problem = build_du_minimax(p, 5);
  const Vector x = Vector::Constant(4, 1e-3), y = Vector::LinSpaced(5, -1, 1);
  EXPECT_EQ(problem->grad_y(x, y), -y);
  EXPECT_EQ(schur_hessian(*problem, x, y), du_value_grad_hess(x, p).hess);
  const double gap = *primal_value(*problem, x) - *problem->optimal_value();
  EXPECT_NEAR(gap, du_value_grad_hess(x, p).value + 4 * p.nu(), 1e-12);
  EXPECT_GT(gap, 0);
}

TEST(DuProblem, DefaultAndOverriddenConstants) {
  const auto p = params(10);
  const auto c = build_du_minimax(p)->constants();
  EXPECT_DOUBLE_EQ(c.ell, 20 * 2.0 * 11);
  EXPECT_DOUBLE_EQ(c.rho, 200 * 3.0 / p.tau);
  EXPECT_DOUBLE_EQ(c.mu, 1.0);
  EXPECT_DOUBLE_EQ(c.P_lower, -10 * p.nu());
  const auto d = build_du_minimax(p, 5, {4.0, 0.8})->constants();
  EXPECT_DOUBLE_EQ(d.H_Lip, 100.0);
  EXPECT_DOUBLE_EQ(d.L_H, 20.0);
}

TEST(DuProblem, RejectsBadParameters) {
  EXPECT_THROW(build_du_minimax(DuFunctionParams{0, 2, 1}), std::invalid_argument);
  EXPECT_THROW(build_du_minimax(DuFunctionParams{3, -1, 1}), std::invalid_argument);
  EXPECT_THROW(build_du_minimax(params(3), 0), std::invalid_argument);
}
