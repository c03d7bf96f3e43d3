#pragma once

#include <limits>
#include <optional>

#include "minimax/inner.hpp"
#include "minimax/problem.hpp"
#include "minimax/trajectory.hpp"

namespace minimax {

/**
 * Settings of the fixed-radius method. Unset optionals take the values
 * that make the second-order certificate hold:
 *
 *   eps1 = eps / 12,  eps2 = √(eps H_Lip) / 6,  radius = √(eps / H_Lip),
 *   max_outer = ⌈6 √H_Lip (P(x0) − P_lower) / eps^1.5⌉.
 *
 * P(x0) is the surrogate f(x0, y0) after the first ascent. Without a finite
 * P_lower the cap falls back to kFallbackMaxOuter.
 */
struct TrConfig {
  double eps = 1e-4;
  std::optional<double> eps1;
  std::optional<double> eps2;
  std::optional<double> radius;
  std::optional<long> max_outer;
  bool record_trajectory = true;
  double max_wall_s = std::numeric_limits<double>::infinity();

  static constexpr long kFallbackMaxOuter = 1'000'000;
};

struct SspCertificate {
  Vector x;
  double grad_norm_bound = 0.0;       // claimed bound on ‖∇P(x)‖
  double hessian_eigen_bound = 0.0;   // claimed lower bound on λ_min(∇²P(x))
  bool terminated_by_dual = false;    // stopping test fired (vs. budget)
  bool budget_exhausted = false;
  long outer_iterations = 0;
  long total_inner_iterations = 0;
};

struct TrResult {
  SspCertificate certificate;
  Trajectory trajectory;
};

/// Resolved settings after defaults are applied.
struct TrSettings {
  double eps1, eps2, radius;
  double dual_threshold;  // 2 √(eps / H_Lip), compared with 2ν/H_Lip
};
TrSettings resolve_tr_settings(const ProblemConstants& c, const TrConfig& config);

/**
 * Runs the fixed-radius inexact trust-region method from (x0, y_init).
 *
 * Each iteration runs the scheduled number of ascent steps, solves the TRS
 * at the fixed radius and moves x by the full step. The run stops right
 * after the step whose scaled multiplier 2ν/H_Lip is at most
 * 2√(eps/H_Lip), returning the new iterate. If the budget runs out the
 * iterate with the lowest surrogate value is returned and flagged.
 *
 * The trajectory has one row per iteration plus a final row for the
 * returned point.
 */
TrResult run_minimax_tr(const MinimaxProblem& problem, const Vector& x0, const Vector& y_init,
                        const TrConfig& config);

}  // namespace minimax
