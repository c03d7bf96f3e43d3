#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "instances.hpp"
#include "minimax/trs.hpp"
#include "oracles.hpp"

using namespace minimax;

namespace {

Vector vec(std::initializer_list<double> v) {
  Vector out(v.size());
  int i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

Matrix diag(std::initializer_list<double> v) { return vec(v).asDiagonal(); }

}  // namespace

TEST(SolveTrs, InteriorNewtonStep) {
  const Matrix H = diag({2.0, 4.0});
  const Vector g = vec({1.0, -2.0});
  const TrsSolution s = solve_trs(g, H, 10.0);
  EXPECT_FALSE(s.on_boundary);
  EXPECT_EQ(s.nu, 0.0);
  EXPECT_NEAR(s.s(0), -0.5, 1e-15);
  EXPECT_NEAR(s.s(1), 0.5, 1e-15);
}

TEST(SolveTrs, ScalarBoundary) {
  // H = 1, g = −1, delta = 0.9: s = 0.9 and (1 + ν) 0.9 = 1.
  const TrsSolution s = solve_trs(vec({-1.0}), diag({1.0}), 0.9);
  EXPECT_TRUE(s.on_boundary);
  EXPECT_NEAR(s.s(0), 0.9, 1e-14);
  EXPECT_NEAR(s.nu, 1.0 / 0.9 - 1.0, 1e-12);
  EXPECT_LE(s.kkt_residual, 1e-12);
}

TEST(SolveTrs, HardCaseZeroGradient) {
  const TrsSolution s = solve_trs(vec({0.0, 0.0}), diag({-2.0, 1.0}), 1.0);
  EXPECT_TRUE(s.hard_case);
  EXPECT_NEAR(s.nu, 2.0, 1e-14);
  EXPECT_NEAR(s.s(0), 1.0, 1e-14);  // positive first nonzero entry
  EXPECT_NEAR(s.s(1), 0.0, 1e-14);
}

TEST(SolveTrs, HardCaseWithOrthogonalGradient) {
  // s = (τ, −1/3) with ν = 1 and τ = √(1 − 1/9).
  const TrsSolution s = solve_trs(vec({0.0, 1.0}), diag({-1.0, 2.0}), 1.0);
  EXPECT_TRUE(s.hard_case);
  EXPECT_NEAR(s.nu, 1.0, 1e-12);
  EXPECT_NEAR(s.s(1), -1.0 / 3.0, 1e-12);
  EXPECT_NEAR(std::abs(s.s(0)), std::sqrt(8.0 / 9.0), 1e-12);
  EXPECT_NEAR(s.s.norm(), 1.0, 1e-14);
}

TEST(SolveTrs, PsdZeroGradientIsZeroStep) {
  const TrsSolution s = solve_trs(vec({0.0, 0.0}), diag({0.0, 3.0}), 1.0);
  EXPECT_EQ(s.s.norm(), 0.0);
  EXPECT_EQ(s.nu, 0.0);
}

TEST(SolveTrs, RejectsBadInput) {
  EXPECT_THROW(solve_trs(vec({1.0}), diag({1.0}), 0.0), std::invalid_argument);
  EXPECT_THROW(solve_trs(vec({1.0}), diag({1.0}), -1.0), std::invalid_argument);
  Matrix H(2, 2);
  H << 1, 2, 0, 1;
  EXPECT_THROW(solve_trs(vec({1.0, 1.0}), H, 1.0), std::invalid_argument);
}

TEST(SolveTrs, RandomInstancesSatisfyOptimality) {
  std::mt19937_64 rng(42);
  using instances::TrsKind;
  for (int k = 0; k < 300; ++k) {
    const int n = 1 + k % 8;
    const auto kind = static_cast<TrsKind>(k % 5);
    const auto inst = instances::random_trs(n, kind, rng);
    const TrsSolution s = solve_trs(inst.g, inst.H, inst.delta);
    EXPECT_LE(s.kkt_residual, 1e-8) << "instance " << k;
    EXPECT_LE(s.s.norm(), inst.delta * (1 + 1e-12));
    EXPECT_GE(s.nu, 0.0);
  }
}

TEST(SolveTrs, MatchesBruteForceInTwoAndThreeDimensions) {
  std::mt19937_64 rng(7);
  using instances::TrsKind;
  for (int k = 0; k < 40; ++k) {
    const int n = 2 + k % 2;
    const auto inst = instances::random_trs(n, static_cast<TrsKind>(k % 5), rng);
    const TrsSolution s = solve_trs(inst.g, inst.H, inst.delta);
    const double ref = oracle::trs_value(inst.g, inst.H, inst.delta);
    EXPECT_NEAR(model_value(inst.g, inst.H, s.s), ref, 1e-6) << "instance " << k;
  }
}

TEST(SolveShifted, IndefiniteIsEmpty) {
  EXPECT_FALSE(solve_shifted(vec({1.0, 1.0}), diag({-1.0, 1.0}), 0.5).has_value());
  const auto s = solve_shifted(vec({1.0, 1.0}), diag({-1.0, 1.0}), 2.0);
  ASSERT_TRUE(s.has_value());
  EXPECT_NEAR((*s)(0), -1.0, 1e-15);
  EXPECT_NEAR((*s)(1), -1.0 / 3.0, 1e-15);
}

TEST(FindLambdaInRange, LandsInTargetInterval) {
  // H = I, g = e1: λ/‖s(λ)‖ = λ(1 + λ).
  const auto r = find_lambda_in_range(vec({1.0, 0.0}), diag({1.0, 1.0}), 0.0, 5.0, 2.0, 3.0);
  EXPECT_TRUE(r.converged);
  const double ratio = r.lambda * (1 + r.lambda);
  EXPECT_GE(ratio, 2.0);
  EXPECT_LE(ratio, 3.0);
  EXPECT_NEAR(r.s.norm(), 1.0 / (1 + r.lambda), 1e-14);
}

TEST(FindLambdaInRange, RejectsNonStraddlingBracket) {
  const Vector g = vec({1.0, 0.0});
  const Matrix H = diag({1.0, 1.0});
  EXPECT_THROW(find_lambda_in_range(g, H, 0.0, 1.0, 3.0, 4.0), std::invalid_argument);
  EXPECT_THROW(find_lambda_in_range(g, H, 2.0, 5.0, 1.0, 40.0), std::invalid_argument);
}

TEST(SolveCubic, ScalarLinear) {
  // −s + s³/3: s = 1, ν = 1.
  const CubicSolution c = solve_cubic(vec({-1.0}), diag({0.0}), 2.0);
  EXPECT_NEAR(c.s(0), 1.0, 1e-12);
  EXPECT_NEAR(c.nu, 1.0, 1e-12);
}

TEST(SolveCubic, ZeroGradientPsd) {
  const CubicSolution c = solve_cubic(vec({0.0, 0.0}), diag({1.0, 0.0}), 3.0);
  EXPECT_EQ(c.s.norm(), 0.0);
}

TEST(SolveCubic, HardCase) {
  // g = 0, λ_min = −2, M = 2: ν = 2 and ‖s‖ = 2ν/M = 2.
  const CubicSolution c = solve_cubic(vec({0.0, 0.0}), diag({-2.0, 1.0}), 2.0);
  EXPECT_TRUE(c.hard_case);
  EXPECT_NEAR(c.s(0), 2.0, 1e-12);
  EXPECT_NEAR(c.s(1), 0.0, 1e-12);
}

TEST(SolveCubic, RandomInstancesAgreeWithBruteForce) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> U(0.2, 5.0);
  using instances::TrsKind;
  for (int k = 0; k < 40; ++k) {
    const int n = 2 + k % 2;
    const auto inst = instances::random_trs(n, static_cast<TrsKind>(k % 5), rng);
    const double M = U(rng);
    const CubicSolution c = solve_cubic(inst.g, inst.H, M);
    // (H + (M/2)‖s‖ I) s = −g and H + νI ⪰ 0.
    const Vector r = inst.H * c.s + 0.5 * M * c.s.norm() * c.s + inst.g;
    EXPECT_LE(r.norm() / (1 + inst.g.norm()), 1e-8) << k;
    EXPECT_NEAR(c.nu, 0.5 * M * c.s.norm(), 1e-8 * (1 + c.nu));
    Eigen::SelfAdjointEigenSolver<Matrix> eig(inst.H);
    EXPECT_GE(eig.eigenvalues()(0) + c.nu, -1e-8);
    const double ref = oracle::cubic_value(inst.g, inst.H, M);
    EXPECT_NEAR(cubic_model_value(inst.g, inst.H, M, c.s), ref, 1e-6) << k;
  }
}

TEST(ModelValue, Quadratic) {
  EXPECT_DOUBLE_EQ(model_value(vec({1.0, 2.0}), diag({2.0, 2.0}), vec({1.0, 1.0})), 5.0);
  EXPECT_DOUBLE_EQ(cubic_model_value(vec({1.0}), diag({0.0}), 6.0, vec({2.0})), 10.0);
}
