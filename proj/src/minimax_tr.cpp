#include "minimax/minimax_tr.hpp"

#include <cmath>
#include <stdexcept>

#include "minimax/trs.hpp"

namespace minimax {

TrSettings resolve_tr_settings(const ProblemConstants& c, const TrConfig& config) {
  if (!(config.eps > 0.0)) throw std::invalid_argument("TrConfig: eps must be positive");
  TrSettings s;
  s.eps1 = config.eps1.value_or(config.eps / 12.0);
  s.eps2 = config.eps2.value_or(std::sqrt(config.eps * c.H_Lip) / 6.0);
  s.radius = config.radius.value_or(std::sqrt(config.eps / c.H_Lip));
  if (!(s.eps1 > 0.0) || !(s.eps2 > 0.0)) {
    throw std::invalid_argument("TrConfig: eps1 and eps2 must be positive");
  }
  if (!(s.radius > 0.0)) throw std::invalid_argument("TrConfig: radius must be positive");
  s.dual_threshold = 2.0 * std::sqrt(config.eps / c.H_Lip);
  return s;
}

TrResult run_minimax_tr(const MinimaxProblem& problem, const Vector& x0, const Vector& y_init,
                        const TrConfig& config) {
  const ProblemConstants& c = problem.constants();
  const TrSettings set = resolve_tr_settings(c, config);
  const WallClock clock;

  TrResult result;
  SspCertificate& cert = result.certificate;
  cert.grad_norm_bound = 1.75 * config.eps;
  cert.hessian_eigen_bound = -13.0 / 6.0 * std::sqrt(c.H_Lip * config.eps);

  Vector x = x0;
  Vector y = y_init;
  const double dist0 = distance_certificate(problem, x, y);
  double prev_step = 0.0;
  long max_outer = config.max_outer.value_or(0);

  Vector best_x = x;
  double best_value = std::numeric_limits<double>::infinity();
  long t = 0;
  for (;; ++t) {
    const long steps = schedule_counts(c, set.eps1, set.eps2, dist0, prev_step, t);
    y = ascend(problem, x, y, AscentSchedule::fixed(steps)).y;
    cert.total_inner_iterations += steps;
    const double surrogate = problem.value(x, y);
    if (t == 0 && !config.max_outer) {
      max_outer = std::isfinite(c.P_lower)
                      ? static_cast<long>(std::ceil(6.0 * std::sqrt(c.H_Lip) *
                                                    std::max(0.0, surrogate - c.P_lower) /
                                                    std::pow(config.eps, 1.5)))
                      : TrConfig::kFallbackMaxOuter;
      max_outer = std::max(1L, max_outer);
    }
    if (surrogate < best_value) {
      best_value = surrogate;
      best_x = x;
    }
    if (t >= max_outer || clock.seconds() > config.max_wall_s) {
      cert.budget_exhausted = true;
      x = best_x;
      break;
    }

    const Vector g = problem.grad_x(x, y);
    const Matrix H = schur_hessian(problem, x, y);
    const TrsSolution sol = solve_trs(g, H, set.radius);
    const double lambda = 2.0 * sol.nu / c.H_Lip;
    const double step = sol.s.norm();

    if (config.record_trajectory) {
      IterationRecord r;
      r.iter = t;
      r.wall_time_s = clock.seconds();
      r.surrogate_P = surrogate;
      r.true_P_gap = true_gap(problem, x);
      r.grad_norm = g.norm();
      r.step_norm = step;
      r.lambda = lambda;
      r.delta = set.radius;
      r.inner_iters = steps;
      result.trajectory.push_back(r);
    }

    x += sol.s;
    prev_step = step;
    cert.outer_iterations = t + 1;
    if (lambda <= set.dual_threshold) {
      cert.terminated_by_dual = true;
      break;
    }
  }
  cert.x = x;

  if (config.record_trajectory) {
    // Closing row for the returned point, with y refreshed by one more round
    // of the schedule.
    const long steps = schedule_counts(c, set.eps1, set.eps2, dist0, prev_step, t + 1);
    const Vector y_out = ascend(problem, x, y, AscentSchedule::fixed(steps)).y;
    IterationRecord r;
    r.iter = result.trajectory.empty() ? 0 : result.trajectory.back().iter + 1;
    r.wall_time_s = clock.seconds();
    r.surrogate_P = problem.value(x, y_out);
    r.true_P_gap = true_gap(problem, x);
    r.grad_norm = problem.grad_x(x, y_out).norm();
    r.step_norm = 0.0;
    r.delta = set.radius;
    r.inner_iters = 0;
    result.trajectory.push_back(r);
  }
  return result;
}

}  // namespace minimax
