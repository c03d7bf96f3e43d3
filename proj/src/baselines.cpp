#include "minimax/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "minimax/inner.hpp"
#include "minimax/trs.hpp"

namespace minimax {

GdaResult run_gda(const MinimaxProblem& problem, const Vector& x0, const Vector& y0,
                  const GdaConfig& config) {
  const ProblemConstants& c = problem.constants();
  const double eta_x = config.eta_x.value_or(1.0 / c.L_P);
  const double eta_y = config.eta_y.value_or(1.0 / c.ell);
  if (!(eta_x > 0.0) || !(eta_y > 0.0)) {
    throw std::invalid_argument("GdaConfig: step sizes must be positive");
  }
  const long stride = std::max(1L, config.record_stride);
  const WallClock clock;

  GdaResult out;
  out.x = x0;
  out.y = y0;
  auto record = [&](long k, const Vector& gx, double step) {
    IterationRecord r;
    r.iter = k;
    r.wall_time_s = clock.seconds();
    r.surrogate_P = problem.value(out.x, out.y);
    r.true_P_gap = true_gap(problem, out.x);
    r.grad_norm = gx.norm();
    r.step_norm = step;
    r.inner_iters = 1;
    out.trajectory.push_back(r);
  };

  long k = 0;
  double last_step = 0.0;
  for (;; ++k) {
    const Vector gx = problem.grad_x(out.x, out.y);
    const bool done = gx.norm() <= config.grad_tol || k >= config.max_iter ||
                      clock.seconds() > config.max_wall_s;
    if (done) {
      out.converged = gx.norm() <= config.grad_tol;
      record(k, gx, last_step);
      break;
    }
    if (k % stride == 0) record(k, gx, eta_x * gx.norm());
    const Vector gy = problem.grad_y(out.x, out.y);
    out.x -= eta_x * gx;
    out.y += eta_y * gy;
    last_step = eta_x * gx.norm();
  }
  out.iterations = k;
  // The final row may duplicate a strided one; keep iter strictly increasing.
  auto& tr = out.trajectory;
  if (tr.size() >= 2 && tr[tr.size() - 2].iter == tr.back().iter) tr.erase(tr.end() - 2);
  return out;
}

TrResult run_mcn(const MinimaxProblem& problem, const Vector& x0, const Vector& y_init,
                 const McnConfig& config) {
  const ProblemConstants& c = problem.constants();
  if (!(config.eps > 0.0)) throw std::invalid_argument("McnConfig: eps must be positive");
  const double M = config.M.value_or(c.H_Lip);
  if (!(M > 0.0)) throw std::invalid_argument("McnConfig: M must be positive");
  const double eps1 = config.eps1.value_or(config.eps / 12.0);
  const double eps2 = config.eps2.value_or(std::sqrt(config.eps * c.H_Lip) / 6.0);
  const double step_tol = 0.5 * std::sqrt(config.eps / c.H_Lip);
  const WallClock clock;

  TrResult result;
  SspCertificate& cert = result.certificate;
  cert.grad_norm_bound = config.eps;
  cert.hessian_eigen_bound = -std::sqrt(config.eps);

  Vector x = x0;
  Vector y = y_init;
  const double dist0 = distance_certificate(problem, x, y);
  double prev_step = 0.0;
  long t = 0;
  for (;; ++t) {
    const long steps = schedule_counts(c, eps1, eps2, dist0, prev_step, t);
    y = ascend(problem, x, y, AscentSchedule::fixed(steps)).y;
    cert.total_inner_iterations += steps;
    if (t >= config.max_outer || clock.seconds() > config.max_wall_s) {
      cert.budget_exhausted = true;
      break;
    }
    const Vector g = problem.grad_x(x, y);
    const Matrix H = schur_hessian(problem, x, y);
    const CubicSolution sol = solve_cubic(g, H, M);
    const double step = sol.s.norm();
    if (config.record_trajectory) {
      IterationRecord r;
      r.iter = t;
      r.wall_time_s = clock.seconds();
      r.surrogate_P = problem.value(x, y);
      r.true_P_gap = true_gap(problem, x);
      r.grad_norm = g.norm();
      r.step_norm = step;
      r.lambda = sol.nu;
      r.inner_iters = steps;
      result.trajectory.push_back(r);
    }
    x += sol.s;
    cert.outer_iterations = t + 1;
    const double recent = t == 0 ? step : std::max(step, prev_step);
    prev_step = step;
    if (recent <= step_tol) {
      cert.terminated_by_dual = true;
      break;
    }
  }
  cert.x = x;
  if (config.record_trajectory) {
    IterationRecord r;
    r.iter = result.trajectory.empty() ? 0 : result.trajectory.back().iter + 1;
    r.wall_time_s = clock.seconds();
    r.surrogate_P = problem.value(x, y);
    r.true_P_gap = true_gap(problem, x);
    r.grad_norm = problem.grad_x(x, y).norm();
    result.trajectory.push_back(r);
  }
  return result;
}

}  // namespace minimax
