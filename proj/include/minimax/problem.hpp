#pragma once

#include <limits>
#include <optional>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace minimax {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Raised when ∇²yy f fails to be negative definite at a queried point.
class ConcavityViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/**
 * Smoothness and curvature constants of f together with the derived
 * constants of the primal function P(x) = max_y f(x, y).
 *
 * The derived fields are never set by hand; use derive_constants().
 */
struct ProblemConstants {
  double ell = 1.0;    // gradient Lipschitz constant of f
  double mu = 1.0;     // strong concavity modulus in y
  double rho = 1.0;    // Hessian Lipschitz constant of f
  double kappa = 1.0;  // ell / mu
  double L_P = 2.0;    // (kappa + 1) ell, Lipschitz constant of ∇P
  double L_H = 4.0;    // rho (1 + kappa)^2, Lipschitz constant of H(x, y)
  double H_Lip = 8.0;  // rho (1 + kappa)^3, Lipschitz constant of ∇²P
  double P_lower = -std::numeric_limits<double>::infinity();
};

/// Computes kappa, L_P, L_H and H_Lip from (ell, mu, rho). Throws
/// std::invalid_argument unless ell >= mu > 0 and rho > 0.
ProblemConstants derive_constants(double ell, double mu, double rho,
                                  double P_lower = -std::numeric_limits<double>::infinity());

/**
 * Oracle bundle for a smooth function f(x, y), strongly concave in y.
 *
 * Implementations must be pure: every method is a function of its
 * arguments only, so one instance can be shared by concurrent solver runs.
 * ∇²yx f is taken to be the transpose of hess_xy().
 */
class MinimaxProblem {
 public:
  virtual ~MinimaxProblem() = default;

  virtual int dim_x() const = 0;
  virtual int dim_y() const = 0;

  virtual double value(const Vector& x, const Vector& y) const = 0;
  virtual Vector grad_x(const Vector& x, const Vector& y) const = 0;
  virtual Vector grad_y(const Vector& x, const Vector& y) const = 0;
  virtual Matrix hess_xx(const Vector& x, const Vector& y) const = 0;
  virtual Matrix hess_xy(const Vector& x, const Vector& y) const = 0;
  virtual Matrix hess_yy(const Vector& x, const Vector& y) const = 0;

  virtual const ProblemConstants& constants() const = 0;

  // Optional closed forms used by tests and the benchmark recorder.
  virtual std::optional<Vector> optimal_y(const Vector& /*x*/) const { return std::nullopt; }
  virtual std::optional<double> optimal_value() const { return std::nullopt; }
};

struct PrimalDualPoint {
  Vector x;
  Vector y;
};

/**
 * Schur-complement surrogate of ∇²P:
 *
 *   H(x, y) = ∇²xx f − ∇²xy f (∇²yy f)⁻¹ ∇²yx f
 *
 * evaluated through a Cholesky factorization of −∇²yy f. The result is
 * symmetrized so that H == Hᵀ holds bit for bit.
 *
 * Throws ConcavityViolation when −∇²yy f is not positive definite.
 */
Matrix schur_hessian(const MinimaxProblem& problem, const Vector& x, const Vector& y);

// Closed-form primal quantities; empty when the problem has no analytic y*(x).
std::optional<double> primal_value(const MinimaxProblem& problem, const Vector& x);
std::optional<Vector> primal_gradient(const MinimaxProblem& problem, const Vector& x);
std::optional<Matrix> primal_hessian(const MinimaxProblem& problem, const Vector& x);

/// Smallest eigenvalue of a symmetric matrix.
double min_eigenvalue(const Matrix& symmetric);

struct FiniteDifferenceReport {
  double grad_x = 0.0;
  double grad_y = 0.0;
  double hess_xx = 0.0;
  double hess_xy = 0.0;
  double hess_yy = 0.0;

  double max_error() const;
};

/**
 * Compares the analytic oracles against central differences with step h.
 * Each entry is max_i |analytic_i − fd_i| / max(1, |analytic|_∞) over the
 * corresponding block. Report only; never throws for bad oracles.
 */
FiniteDifferenceReport finite_difference_check(const MinimaxProblem& problem, const Vector& x,
                                               const Vector& y, double h = 1e-5);

}  // namespace minimax
