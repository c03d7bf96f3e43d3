#pragma once

#include <optional>

#include "minimax/problem.hpp"

namespace minimax {

/**
 * Global solution of min gᵀs + ½ sᵀHs subject to ‖s‖ ≤ delta, with the
 * multiplier nu satisfying
 *
 *   (H + nu I) s = −g,   H + nu I ⪰ 0,   nu (delta − ‖s‖) = 0.
 *
 * kkt_residual is the largest violation of those three conditions, the
 * first one measured relative to ‖g‖ + 1.
 */
struct TrsSolution {
  Vector s;
  double nu = 0.0;
  bool on_boundary = false;
  bool hard_case = false;
  double kkt_residual = 0.0;
};

/// Value of the quadratic model gᵀs + ½ sᵀHs.
double model_value(const Vector& g, const Matrix& H, const Vector& s);

/**
 * Exact trust-region subproblem solver.
 *
 * Works in the eigenbasis of H: the interior Newton step is taken when
 * H ≻ 0 and it fits, otherwise the secular equation ‖s(nu)‖ = delta is
 * solved for nu > max(0, −λ_min) by safeguarded Newton on 1/‖s(nu)‖. In the
 * hard case an eigenvector of λ_min, oriented so its first nonzero entry is
 * positive, is added to reach the boundary.
 *
 * Throws std::invalid_argument when delta <= 0 or H is not symmetric to
 * within `tol` (relative to max(1, |H|_∞)).
 */
TrsSolution solve_trs(const Vector& g, const Matrix& H, double delta, double tol = 1e-10);

/// s = −(H + lambda I)⁻¹ g, or empty when H + lambda I is not positive definite.
std::optional<Vector> solve_shifted(const Vector& g, const Matrix& H, double lambda);

struct LambdaSearchResult {
  double lambda = 0.0;
  Vector s;
  int bisections = 0;
  bool converged = true;  // false: 200 bisections ran out, hi endpoint returned
};

/**
 * Finds lambda in (lambda_lo, lambda_hi) whose shifted step satisfies
 * sigma_lo ≤ lambda / ‖s(lambda)‖ ≤ sigma_hi by bisection; the ratio is
 * strictly increasing in lambda on the positive-definite range.
 *
 * Throws std::invalid_argument when the bracket does not straddle the
 * target interval.
 */
LambdaSearchResult find_lambda_in_range(const Vector& g, const Matrix& H, double lambda_lo,
                                        double lambda_hi, double sigma_lo, double sigma_hi);

struct CubicSolution {
  Vector s;
  double nu = 0.0;  // (M/2)‖s‖
  bool hard_case = false;
};

/**
 * Global minimizer of gᵀs + ½ sᵀHs + (M/6)‖s‖³, characterized by
 * (H + (M/2)‖s‖ I) s = −g with H + (M/2)‖s‖ I ⪰ 0.
 */
CubicSolution solve_cubic(const Vector& g, const Matrix& H, double M);

/// gᵀs + ½ sᵀHs + (M/6)‖s‖³.
double cubic_model_value(const Vector& g, const Matrix& H, double M, const Vector& s);

}  // namespace minimax
