#pragma once

#include <functional>
#include <limits>

#include "minimax/problem.hpp"
#include "minimax/trs.hpp"

namespace minimax {

enum class AscentMode { kFixedCount, kTolerance };

/**
 * Gradient-ascent schedule for the y-subproblem.
 *
 * In fixed-count mode exactly `steps` iterations of
 * y <- y + step_size * ∇y f(x, y) are run. In tolerance mode the loop stops
 * once the strong-concavity certificate ‖∇y f(x, y)‖ / μ drops to
 * `target_dist`, which bounds ‖y − y*(x)‖ from above.
 */
struct AscentSchedule {
  AscentMode mode = AscentMode::kFixedCount;
  long steps = 0;
  double target_dist = 0.0;
  double step_size = 0.0;  // 0 selects 2 / (ell + mu)
  long max_steps = 1'000'000;

  static AscentSchedule fixed(long steps, double step_size = 0.0);
  static AscentSchedule tolerance(double target_dist, double step_size = 0.0);
};

struct AscentResult {
  Vector y;
  long iterations = 0;
};

/// Certified upper bound on ‖y − y*(x)‖ from μ-strong concavity.
double distance_certificate(const MinimaxProblem& problem, const Vector& x, const Vector& y);

/// A = min{eps1 / ell, eps2 / L_H}; the accuracy ‖y_t − y*(x_t)‖ ≤ A the
/// fixed schedule maintains.
double ascent_accuracy_target(const ProblemConstants& constants, double eps1, double eps2);

/**
 * Number of ascent steps guaranteeing ‖y_t − y*(x_t)‖ ≤ A:
 *
 *   t = 0:  N_0 = ⌈κ ln(dist0 / A)⌉₊
 *   t ≥ 1:  N_t = ⌈κ ln((A + κ‖s_{t−1}‖) / A)⌉₊
 *
 * with A = ascent_accuracy_target(). `dist0` is only read at t = 0 and
 * `step_norm_prev` only for t ≥ 1.
 */
long schedule_counts(const ProblemConstants& constants, double eps1, double eps2, double dist0,
                     double step_norm_prev, long t);

/// Runs gradient ascent on f(x, ·). Tolerance mode throws std::runtime_error
/// when max_steps is exceeded.
AscentResult ascend(const MinimaxProblem& problem, const Vector& x, const Vector& y_start,
                    const AscentSchedule& schedule);

/// Maps the surrogate gradient/Hessian to a trial step.
using TrialStepProvider = std::function<TrsSolution(const Vector& g, const Matrix& H)>;

struct ConsistencyConstants {
  double C1 = 1.0;
  double C2 = 1.0;
  double M2 = std::numeric_limits<double>::infinity();
  // Relative floor on the bound, max(1, ‖y‖) times this; keeps a zero step
  // from demanding an exact maximizer.
  double floor = 1e-13;
};

struct ConsistentAscentResult {
  Vector y;
  Vector g;  // ∇x f(x, y)
  Matrix H;  // schur_hessian(x, y)
  TrsSolution step;
  double accuracy_bound = 0.0;  // min{C1‖s‖²/ℓ, M2/ℓ, C2‖s‖/L_H, M2/L_H}
  double certificate = 0.0;     // ‖∇y f‖ / μ at the returned y
  int rounds = 0;               // refinement rounds performed
  long iterations = 0;          // total ascent steps
};

/// The accuracy bound required by the inexactness contract for a step of
/// norm `step_norm`. Infinite constants drop their term; the floor is not
/// applied here.
double consistency_bound(const ProblemConstants& constants, const ConsistencyConstants& cc,
                         double step_norm);

/**
 * Refines y until it is accurate enough for the step it produces.
 *
 * Each round evaluates g and H at the current y, asks `provider` for a
 * trial step s and compares the certificate ‖∇y f‖/μ with
 * consistency_bound(‖s‖). On failure y is pushed by tolerance-mode ascent
 * to half the bound and the round repeats. Throws std::runtime_error
 * ("consistency loop stalled") after `max_rounds` unsuccessful rounds.
 */
ConsistentAscentResult ascend_consistent(const MinimaxProblem& problem, const Vector& x,
                                         const Vector& y_start, const ConsistencyConstants& cc,
                                         const TrialStepProvider& provider, int max_rounds = 50);

}  // namespace minimax
