#pragma once

#include <array>
#include <limits>
#include <optional>
#include <vector>

#include "minimax/inner.hpp"
#include "minimax/minimax_tr.hpp"
#include "minimax/problem.hpp"
#include "minimax/trajectory.hpp"

namespace minimax {

struct TraceConfig {
  double eta = 0.1;
  double gamma_C = 0.5;
  double gamma_E = 2.5;
  double gamma_lambda = 2.0;
  double sigma_lo = 1e-4;
  double sigma_hi = 1e4;
  double delta0 = 1.0;
  double Delta0 = 1e3;
  double sigma0 = 1.0;
  long max_outer = 100'000;
  double eps = 1e-4;
  double C1 = 1.0;
  double C2 = 1.0;
  std::optional<double> M2;  // unset: √eps / 2
  bool record_trajectory = true;
  double max_wall_s = std::numeric_limits<double>::infinity();

  /// Throws std::invalid_argument when the parameter constraints fail.
  void validate() const;
};

struct TraceState {
  Vector x;
  Vector y;
  double delta = 1.0;
  double Delta = 1e3;
  double sigma = 1.0;
  Vector s;
  double lambda = 0.0;
  double rho = 0.0;
};

/// (P_before − P_after) / step_norm³. Throws std::invalid_argument for step_norm <= 0.
double compute_rho(double P_before, double P_after, double step_norm);

/**
 * ACCEPT when rho ≥ eta and either lambda ≤ sigma‖s‖ or ‖s‖ = Delta (the
 * latter to relative tolerance 1e-9, giving ACCEPT_DELTA); CONTRACT when
 * rho < eta; EXPAND otherwise.
 */
StepClass classify(double rho, double eta, double lambda, double sigma, double step_norm,
                   double Delta);

/**
 * Radius after a rejected step whose ratio test failed. With g and H the
 * model data of the rejected step (s, lambda):
 *
 *   lambda < σ̲‖s‖:  λ̂ = lambda + √(σ̲‖g‖), s¹ = −(H + λ̂I)⁻¹g; returns ‖s¹‖ if
 *                   λ̂/‖s¹‖ ≤ σ̄, otherwise ‖s²‖ for a multiplier in (lambda, λ̂)
 *                   whose ratio lands in [σ̲, σ̄].
 *   otherwise:      s³ = −(H + γ_λ lambda I)⁻¹g; returns max{‖s³‖, γ_C‖s‖}.
 *
 * Throws std::runtime_error if a shifted system is not positive definite.
 */
double contract(const Vector& g, const Matrix& H, const Vector& s, double lambda,
                const TraceConfig& config);

/// Applies the accept/contract/expand transition to (x, delta, Delta, sigma).
/// y is left to the caller.
TraceState trace_update(const TraceState& state, StepClass cls, const Vector& g, const Matrix& H,
                        const TraceConfig& config);

struct StepClassCounts {
  long accept_sigma = 0;
  long accept_delta = 0;
  long contract = 0;
  long expand = 0;

  void add(StepClass cls);
  long total() const { return accept_sigma + accept_delta + contract + expand; }
};

/// Per-iteration state snapshot, taken after classification.
struct TraceStep {
  long iter = 0;
  double delta = 0.0;
  double Delta = 0.0;
  double sigma = 0.0;
  double lambda = 0.0;
  double step_norm = 0.0;
  double rho = 0.0;
  double grad_norm = 0.0;
  StepClass cls = StepClass::kAcceptSigma;
  Vector x;  // iterate the step was computed at
};

struct TraceResult {
  SspCertificate certificate;
  Trajectory trajectory;
  StepClassCounts counts;
  std::vector<TraceStep> steps;
};

/**
 * MINIMAX-TRACE from (x0, y_init).
 *
 * y is refined by ascend_consistent so its certified accuracy matches the
 * step it produces. The ratio uses surrogate values f(x, y) and
 * f(x + s, y⁺), with y⁺ refined at the trial point to the same accuracy;
 * y⁺ is kept only when the step is accepted. The run stops when
 * ‖g‖ ≤ eps/2 and λ_min(H) ≥ −√eps/2.
 */
TraceResult run_minimax_trace(const MinimaxProblem& problem, const Vector& x0,
                              const Vector& y_init, const TraceConfig& config);

}  // namespace minimax
