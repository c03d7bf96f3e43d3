#pragma once

#include <memory>
#include <numbers>
#include <optional>
#include <random>
#include <vector>

#include "minimax/problem.hpp"

namespace minimax {

/// Piecewise polynomial test function with n saddles chained in front of a
/// single local minimum at (4τ, …, 4τ).
struct DuFunctionParams {
  int n = 10;
  double L = 2.0;
  double gamma = 1.0;

  static constexpr double tau = std::numbers::e;

  /// ν = (37L + 13γ) τ² / 6.
  double nu() const;
  /// Throws std::invalid_argument unless n ≥ 1, L > 0, gamma > 0.
  void validate() const;
};

struct Poly1 {
  double value, d1, d2;
};
Poly1 du_h1(double x, const DuFunctionParams& p);
Poly1 du_h2(double x, const DuFunctionParams& p);

/// ν from its defining expression −h1(2τ) + 4Lτ².
double du_nu_from_h1(const DuFunctionParams& p);

/// i is 1-based; i = n + 1 is the final quadratic region, where branch is 1.
struct RegionIndex {
  int i = 1;
  int branch = 1;
  bool operator==(const RegionIndex&) const = default;
};

/**
 * Region selection on coordinates clamped into [0, 6τ]: i is the first
 * index with x_i < 2τ (n + 1 if none), branch 1 iff x_i ≤ τ.
 */
RegionIndex classify_region(const Vector& x, const DuFunctionParams& p);

struct DuEvaluation {
  double value = 0.0;
  Vector grad;
  Matrix hess;
};

/**
 * Value and derivatives of the piece selected by classify_region. The piece
 * is evaluated at x itself, not at the clamped point, so outside the
 * nominal domain the function continues the selected polynomial.
 */
DuEvaluation du_value_grad_hess(const Vector& x, const DuFunctionParams& p, bool want_grad = true,
                                bool want_hess = true);

/// (0,…,0), (4τ,0,…,0), …, (4τ,…,4τ,0) and the minimizer (4τ,…,4τ), in that order.
std::vector<Vector> du_stationary_points(const DuFunctionParams& p);

/// Uniform draw of a region i, then of a point of that region of the domain:
/// earlier coordinates in [2τ, 6τ], x_i in [0, 2τ), later ones in [0, τ].
Vector du_random_domain_point(const DuFunctionParams& p, std::mt19937_64& rng);

struct DuConstantsOverride {
  std::optional<double> ell;  // default 20 L (n + 1)
  std::optional<double> rho;  // default 200 (L + γ) / τ
};

/// f(x, y) = g(x) − ½‖y‖² with μ = 1, y*(x) = 0 and P* = −nν.
std::shared_ptr<const MinimaxProblem> build_du_minimax(const DuFunctionParams& p, int dim_y = 5,
                                                       const DuConstantsOverride& constants = {});

}  // namespace minimax
