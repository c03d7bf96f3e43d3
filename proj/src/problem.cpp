#include "minimax/problem.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

namespace minimax {

ProblemConstants derive_constants(double ell, double mu, double rho, double P_lower) {
  if (!(mu > 0.0)) throw std::invalid_argument("derive_constants: mu must be positive");
  if (!(ell >= mu)) throw std::invalid_argument("derive_constants: ell must be >= mu");
  if (!(rho > 0.0)) throw std::invalid_argument("derive_constants: rho must be positive");

  ProblemConstants c;
  c.ell = ell;
  c.mu = mu;
  c.rho = rho;
  c.kappa = ell / mu;
  c.L_P = (c.kappa + 1.0) * ell;
  c.L_H = rho * (1.0 + c.kappa) * (1.0 + c.kappa);
  c.H_Lip = rho * std::pow(1.0 + c.kappa, 3);
  c.P_lower = P_lower;
  return c;
}

Matrix schur_hessian(const MinimaxProblem& problem, const Vector& x, const Vector& y) {
  Matrix H = problem.hess_xx(x, y);
  const Matrix B = problem.hess_xy(x, y);

  const Matrix neg_yy = -problem.hess_yy(x, y);
  Eigen::LLT<Matrix> llt(neg_yy);
  if (llt.info() != Eigen::Success) {
    throw ConcavityViolation("schur_hessian: -hess_yy is not positive definite");
  }
  // H + B (−∇²yy)⁻¹ Bᵀ, formed as H + WᵀW with W = L⁻¹Bᵀ.
  const Matrix W = llt.matrixL().solve(B.transpose());
  H.noalias() += W.transpose() * W;
  return 0.5 * (H + H.transpose());
}

std::optional<double> primal_value(const MinimaxProblem& problem, const Vector& x) {
  auto y_star = problem.optimal_y(x);
  if (!y_star) return std::nullopt;
  return problem.value(x, *y_star);
}

std::optional<Vector> primal_gradient(const MinimaxProblem& problem, const Vector& x) {
  auto y_star = problem.optimal_y(x);
  if (!y_star) return std::nullopt;
  return problem.grad_x(x, *y_star);
}

std::optional<Matrix> primal_hessian(const MinimaxProblem& problem, const Vector& x) {
  auto y_star = problem.optimal_y(x);
  if (!y_star) return std::nullopt;
  return schur_hessian(problem, x, *y_star);
}

double min_eigenvalue(const Matrix& symmetric) {
  if (symmetric.rows() == 1) return symmetric(0, 0);
  Eigen::SelfAdjointEigenSolver<Matrix> eig(symmetric, Eigen::EigenvaluesOnly);
  return eig.eigenvalues()(0);
}

double FiniteDifferenceReport::max_error() const {
  return std::max({grad_x, grad_y, hess_xx, hess_xy, hess_yy});
}

namespace {

double relative_error(const Eigen::Ref<const Matrix>& analytic,
                      const Eigen::Ref<const Matrix>& approx) {
  if (analytic.size() == 0) return 0.0;
  const double scale = std::max(1.0, analytic.cwiseAbs().maxCoeff());
  return (analytic - approx).cwiseAbs().maxCoeff() / scale;
}

}  // namespace

FiniteDifferenceReport finite_difference_check(const MinimaxProblem& problem, const Vector& x,
                                               const Vector& y, double h) {
  const int n = problem.dim_x();
  const int m = problem.dim_y();
  FiniteDifferenceReport report;

  Vector fd_gx(n);
  Matrix fd_hxx(n, n);
  Matrix fd_hxy(n, m);
  for (int i = 0; i < n; ++i) {
    Vector xp = x, xm = x;
    xp(i) += h;
    xm(i) -= h;
    fd_gx(i) = (problem.value(xp, y) - problem.value(xm, y)) / (2.0 * h);
    fd_hxx.col(i) = (problem.grad_x(xp, y) - problem.grad_x(xm, y)) / (2.0 * h);
  }
  Vector fd_gy(m);
  Matrix fd_hyy(m, m);
  for (int j = 0; j < m; ++j) {
    Vector yp = y, ym = y;
    yp(j) += h;
    ym(j) -= h;
    fd_gy(j) = (problem.value(x, yp) - problem.value(x, ym)) / (2.0 * h);
    fd_hyy.col(j) = (problem.grad_y(x, yp) - problem.grad_y(x, ym)) / (2.0 * h);
    // ∂/∂y_j of ∇x f is column j of ∇²xy f.
    fd_hxy.col(j) = (problem.grad_x(x, yp) - problem.grad_x(x, ym)) / (2.0 * h);
  }

  report.grad_x = relative_error(problem.grad_x(x, y), fd_gx);
  report.grad_y = relative_error(problem.grad_y(x, y), fd_gy);
  report.hess_xx = relative_error(problem.hess_xx(x, y), fd_hxx);
  report.hess_xy = relative_error(problem.hess_xy(x, y), fd_hxy);
  report.hess_yy = relative_error(problem.hess_yy(x, y), fd_hyy);
  return report;
}

}  // namespace minimax
