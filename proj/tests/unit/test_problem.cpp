#include <gtest/gtest.h>

#include <cmath>

#include <Eigen/LU>

#include "minimax/du_function.hpp"
#include "minimax/problem.hpp"
#include "minimax/quadratic.hpp"

using namespace minimax;

namespace {

// f = ½xᵀAx + xᵀBy + ½yᵀSy with S positive definite: convex in y, which
// must be rejected by the Schur complement.
class ConvexInY final : public MinimaxProblem {
 public:
  int dim_x() const override { return 1; }
  int dim_y() const override { return 1; }
  double value(const Vector& x, const Vector& y) const override {
    return 0.5 * x(0) * x(0) + 0.5 * y(0) * y(0);
  }
  Vector grad_x(const Vector& x, const Vector&) const override { return x; }
  Vector grad_y(const Vector&, const Vector& y) const override { return y; }
  Matrix hess_xx(const Vector&, const Vector&) const override { return Matrix::Ones(1, 1); }
  Matrix hess_xy(const Vector&, const Vector&) const override { return Matrix::Zero(1, 1); }
  Matrix hess_yy(const Vector&, const Vector&) const override { return Matrix::Ones(1, 1); }
  const ProblemConstants& constants() const override { return c_; }

 private:
  ProblemConstants c_ = derive_constants(1, 1, 1);
};

// Wraps a problem and perturbs grad_x.
class CorruptedGradient final : public MinimaxProblem {
 public:
  explicit CorruptedGradient(std::shared_ptr<const MinimaxProblem> p) : p_(std::move(p)) {}
  int dim_x() const override { return p_->dim_x(); }
  int dim_y() const override { return p_->dim_y(); }
  double value(const Vector& x, const Vector& y) const override { return p_->value(x, y); }
  Vector grad_x(const Vector& x, const Vector& y) const override {
    Vector g = p_->grad_x(x, y);
    g(0) += 1.0;
    return g;
  }
  Vector grad_y(const Vector& x, const Vector& y) const override { return p_->grad_y(x, y); }
  Matrix hess_xx(const Vector& x, const Vector& y) const override { return p_->hess_xx(x, y); }
  Matrix hess_xy(const Vector& x, const Vector& y) const override { return p_->hess_xy(x, y); }
  Matrix hess_yy(const Vector& x, const Vector& y) const override { return p_->hess_yy(x, y); }
  const ProblemConstants& constants() const override { return p_->constants(); }

 private:
  std::shared_ptr<const MinimaxProblem> p_;
};

}  // namespace

TEST(DeriveConstants, UnitCondition) {
  const auto c = derive_constants(1, 1, 1);
  EXPECT_DOUBLE_EQ(c.kappa, 1);
  EXPECT_DOUBLE_EQ(c.L_P, 2);
  EXPECT_DOUBLE_EQ(c.L_H, 4);
  EXPECT_DOUBLE_EQ(c.H_Lip, 8);
}

TEST(DeriveConstants, ConditionTwo) {
  const auto c = derive_constants(2, 1, 1);
  EXPECT_DOUBLE_EQ(c.kappa, 2);
  EXPECT_DOUBLE_EQ(c.L_P, 6);
  EXPECT_DOUBLE_EQ(c.L_H, 9);
  EXPECT_DOUBLE_EQ(c.H_Lip, 27);
}

TEST(DeriveConstants, RejectsInvalid) {
  EXPECT_THROW(derive_constants(1, 0, 1), std::invalid_argument);
  EXPECT_THROW(derive_constants(0.5, 1, 1), std::invalid_argument);
  EXPECT_THROW(derive_constants(1, 1, 0), std::invalid_argument);
  EXPECT_THROW(derive_constants(1, -1, 1), std::invalid_argument);
}

TEST(SchurHessian, ScalarSquare) {
  const auto p = build_scalar_square_minimax();
  const Vector x = Vector::Constant(1, 0.3), y = Vector::Constant(1, -2.0);
  EXPECT_DOUBLE_EQ(schur_hessian(*p, x, y)(0, 0), 2.0);
}

TEST(SchurHessian, DecoupledEqualsHessXX) {
  DuFunctionParams dp;
  dp.n = 4;
  const auto p = build_du_minimax(dp, 3);
  Vector x(4);
  x << 1.0, 0.2, 0.1, 0.3;
  const Vector y = Vector::Constant(3, 0.7);
  const Matrix H = schur_hessian(*p, x, y);
  EXPECT_EQ((H - p->hess_xx(x, y)).cwiseAbs().maxCoeff(), 0.0);
}

TEST(SchurHessian, MatchesExplicitInverse) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    QuadraticOptions o;
    o.seed = seed;
    o.n = 3;
    o.m = 2;
    const auto p = build_quadratic_minimax(o);
    const Vector x = Vector::LinSpaced(3, -1, 1), y = Vector::Ones(2);
    const Matrix oracle = p->A() + p->B() * p->C().inverse() * p->B().transpose();
    EXPECT_LE((schur_hessian(*p, x, y) - oracle).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(SchurHessian, ExactlySymmetric) {
  QuadraticOptions o;
  o.seed = 3;
  o.n = 6;
  o.m = 4;
  const auto p = build_quadratic_minimax(o);
  const Matrix H = schur_hessian(*p, Vector::Ones(6), Vector::Ones(4));
  EXPECT_TRUE(H == H.transpose());
}

TEST(SchurHessian, AgreesWithFiniteDifferenceHessianOfP) {
  QuadraticOptions o;
  o.seed = 11;
  o.n = 3;
  o.m = 3;
  o.quartic = 0.5;
  const auto p = build_quadratic_minimax(o);
  Vector x(3);
  x << 0.4, -0.7, 1.1;
  const double h = 1e-4;
  Matrix fd(3, 3);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      auto P = [&](double di, double dj) {
        Vector z = x;
        z(i) += di;
        z(j) += dj;
        return *primal_value(*p, z);
      };
      fd(i, j) = (P(h, h) - P(h, -h) - P(-h, h) + P(-h, -h)) / (4 * h * h);
    }
  }
  const Matrix H = schur_hessian(*p, x, *p->optimal_y(x));
  EXPECT_LE((H - fd).cwiseAbs().maxCoeff() / H.cwiseAbs().maxCoeff(), 1e-4);
}

TEST(SchurHessian, RejectsConvexY) {
  ConvexInY p;
  EXPECT_THROW(schur_hessian(p, Vector::Zero(1), Vector::Zero(1)), ConcavityViolation);
}

TEST(FiniteDifference, QuadraticIsExact) {
  QuadraticOptions o;
  o.seed = 5;
  const auto p = build_quadratic_minimax(o);
  const auto r = finite_difference_check(*p, Vector::Constant(3, 0.3), Vector::Constant(2, -0.4));
  EXPECT_LE(r.max_error(), 1e-8);
}

TEST(FiniteDifference, DuFinalRegion) {
  DuFunctionParams dp;
  dp.n = 5;
  const auto p = build_du_minimax(dp);
  Vector x(5);
  x << 3.5 * dp.tau, 4.2 * dp.tau, 5 * dp.tau, 2.5 * dp.tau, 3 * dp.tau;
  EXPECT_LE(finite_difference_check(*p, x, Vector::Ones(5)).max_error(), 1e-5);
}

TEST(FiniteDifference, DetectsCorruptedGradient) {
  CorruptedGradient p(build_scalar_square_minimax());
  const auto r = finite_difference_check(p, Vector::Constant(1, 0.5), Vector::Constant(1, 0.2));
  EXPECT_GE(r.grad_x, 1e-1);
}

TEST(PrimalQuantities, DuGradientIndependentOfY) {
  DuFunctionParams dp;
  dp.n = 3;
  const auto p = build_du_minimax(dp, 2);
  const Vector x = Vector::Constant(3, 1.7);
  EXPECT_EQ(p->grad_x(x, Vector::Zero(2)), p->grad_x(x, Vector::Constant(2, 9.0)));
  EXPECT_EQ(p->grad_x(x, Vector::Zero(2)), du_value_grad_hess(x, dp).grad);
}

TEST(PrimalQuantities, ScalarSquare) {
  const auto p = build_scalar_square_minimax();
  const Vector x = Vector::Constant(1, 1.5);
  EXPECT_NEAR(*primal_value(*p, x), 2.25, 1e-15);
  EXPECT_NEAR((*primal_gradient(*p, x))(0), 3.0, 1e-15);
  EXPECT_NEAR((*primal_hessian(*p, x))(0, 0), 2.0, 1e-15);
}

TEST(MinEigenvalue, Diagonal) {
  Matrix M = Vector(Eigen::Vector3d(3, -2, 5)).asDiagonal();
  EXPECT_DOUBLE_EQ(min_eigenvalue(M), -2.0);
}
