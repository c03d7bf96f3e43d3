#include "minimax/inner.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace minimax {

AscentSchedule AscentSchedule::fixed(long steps, double step_size) {
  AscentSchedule s;
  s.mode = AscentMode::kFixedCount;
  s.steps = steps;
  s.step_size = step_size;
  return s;
}

AscentSchedule AscentSchedule::tolerance(double target_dist, double step_size) {
  AscentSchedule s;
  s.mode = AscentMode::kTolerance;
  s.target_dist = target_dist;
  s.step_size = step_size;
  return s;
}

double distance_certificate(const MinimaxProblem& problem, const Vector& x, const Vector& y) {
  return problem.grad_y(x, y).norm() / problem.constants().mu;
}

double ascent_accuracy_target(const ProblemConstants& c, double eps1, double eps2) {
  return std::min(eps1 / c.ell, eps2 / c.L_H);
}

long schedule_counts(const ProblemConstants& c, double eps1, double eps2, double dist0,
                     double step_norm_prev, long t) {
  const double A = ascent_accuracy_target(c, eps1, eps2);
  const double ratio = t == 0 ? dist0 / A : (A + c.kappa * step_norm_prev) / A;
  if (!(ratio > 1.0)) return 0;
  return static_cast<long>(std::ceil(c.kappa * std::log(ratio)));
}

AscentResult ascend(const MinimaxProblem& problem, const Vector& x, const Vector& y_start,
                    const AscentSchedule& schedule) {
  const ProblemConstants& c = problem.constants();
  const double eta = schedule.step_size > 0.0 ? schedule.step_size : 2.0 / (c.ell + c.mu);
  AscentResult out{y_start, 0};
  if (schedule.mode == AscentMode::kFixedCount) {
    for (long k = 0; k < schedule.steps; ++k) out.y += eta * problem.grad_y(x, out.y);
    out.iterations = schedule.steps;
    return out;
  }
  for (;;) {
    const Vector gy = problem.grad_y(x, out.y);
    if (gy.norm() / c.mu <= schedule.target_dist) return out;
    if (out.iterations >= schedule.max_steps) {
      throw std::runtime_error("ascend: tolerance not reached within max_steps");
    }
    out.y += eta * gy;
    ++out.iterations;
  }
}

double consistency_bound(const ProblemConstants& c, const ConsistencyConstants& cc,
                         double step_norm) {
  double bound = std::numeric_limits<double>::infinity();
  auto take = [&](double coef, double value) {
    if (std::isfinite(coef)) bound = std::min(bound, value);
  };
  take(cc.C1, cc.C1 * step_norm * step_norm / c.ell);
  take(cc.M2, cc.M2 / c.ell);
  take(cc.C2, cc.C2 * step_norm / c.L_H);
  take(cc.M2, cc.M2 / c.L_H);
  return bound;
}

ConsistentAscentResult ascend_consistent(const MinimaxProblem& problem, const Vector& x,
                                         const Vector& y_start, const ConsistencyConstants& cc,
                                         const TrialStepProvider& provider, int max_rounds) {
  const ProblemConstants& c = problem.constants();
  ConsistentAscentResult out;
  out.y = y_start;
  for (int round = 1; round <= max_rounds; ++round) {
    out.rounds = round;
    out.g = problem.grad_x(x, out.y);
    out.H = schur_hessian(problem, x, out.y);
    out.step = provider(out.g, out.H);
    out.accuracy_bound = std::max(consistency_bound(c, cc, out.step.s.norm()),
                                  cc.floor * std::max(1.0, out.y.norm()));
    out.certificate = distance_certificate(problem, x, out.y);
    if (out.certificate <= out.accuracy_bound) return out;
    const AscentResult refined =
        ascend(problem, x, out.y, AscentSchedule::tolerance(0.5 * out.accuracy_bound));
    out.y = refined.y;
    out.iterations += refined.iterations;
  }
  throw std::runtime_error("consistency loop stalled");
}

}  // namespace minimax
