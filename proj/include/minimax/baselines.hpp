#pragma once

#include <limits>
#include <optional>

#include "minimax/minimax_tr.hpp"
#include "minimax/problem.hpp"
#include "minimax/trajectory.hpp"

namespace minimax {

/// Simultaneous gradient descent ascent. Unset step sizes default to
/// eta_x = 1/L_P and eta_y = 1/ell.
struct GdaConfig {
  std::optional<double> eta_x;
  std::optional<double> eta_y;
  long max_iter = 100'000;
  double grad_tol = 1e-8;
  long record_stride = 1;
  double max_wall_s = std::numeric_limits<double>::infinity();
};

struct GdaResult {
  Vector x;
  Vector y;
  long iterations = 0;
  bool converged = false;  // ‖∇x f‖ ≤ grad_tol was reached
  Trajectory trajectory;
};

/// Rows are written every record_stride iterations and for the final iterate.
GdaResult run_gda(const MinimaxProblem& problem, const Vector& x0, const Vector& y0,
                  const GdaConfig& config);

/// Cubic-regularized Newton on x with the ascent schedule of the
/// fixed-radius method. M defaults to H_Lip; eps1/eps2 as in TrConfig.
struct McnConfig {
  std::optional<double> M;
  double eps = 1e-4;
  std::optional<double> eps1;
  std::optional<double> eps2;
  long max_outer = 100'000;
  bool record_trajectory = true;
  double max_wall_s = std::numeric_limits<double>::infinity();
};

/**
 * Stops after the step for which max{‖s_t‖, ‖s_{t−1}‖} ≤ ½√(eps/H_Lip) and
 * returns x_{t+1}; at t = 0 only ‖s_0‖ is tested. A run that exhausts its
 * budget returns the last iterate, flagged.
 */
TrResult run_mcn(const MinimaxProblem& problem, const Vector& x0, const Vector& y_init,
                 const McnConfig& config);

}  // namespace minimax
