#include "minimax/minimax_trace.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "minimax/trs.hpp"

namespace minimax {

void TraceConfig::validate() const {
  if (!(eta > 0.0 && eta < 1.0)) throw std::invalid_argument("TraceConfig: eta must lie in (0,1)");
  if (!(gamma_C > 0.0 && gamma_C < 1.0 && gamma_E > 1.0)) {
    throw std::invalid_argument("TraceConfig: need 0 < gamma_C < 1 < gamma_E");
  }
  if (!(gamma_lambda > 1.0)) throw std::invalid_argument("TraceConfig: gamma_lambda must be > 1");
  if (!(sigma_lo > 0.0 && sigma_lo <= sigma_hi)) {
    throw std::invalid_argument("TraceConfig: need 0 < sigma_lo <= sigma_hi");
  }
  if (!(delta0 > 0.0 && delta0 <= Delta0)) {
    throw std::invalid_argument("TraceConfig: need 0 < delta0 <= Delta0");
  }
  if (!(sigma0 >= sigma_lo)) throw std::invalid_argument("TraceConfig: sigma0 must be >= sigma_lo");
  if (!(eps > 0.0)) throw std::invalid_argument("TraceConfig: eps must be positive");
  if (max_outer < 1) throw std::invalid_argument("TraceConfig: max_outer must be >= 1");
}

double compute_rho(double P_before, double P_after, double step_norm) {
  if (!(step_norm > 0.0)) throw std::invalid_argument("compute_rho: step_norm must be positive");
  return (P_before - P_after) / (step_norm * step_norm * step_norm);
}

StepClass classify(double rho, double eta, double lambda, double sigma, double step_norm,
                   double Delta) {
  if (rho < eta) return StepClass::kContract;
  const bool at_outer = std::abs(step_norm - Delta) <= 1e-9 * Delta;
  if (at_outer) return StepClass::kAcceptDelta;
  if (lambda <= sigma * step_norm) return StepClass::kAcceptSigma;
  return StepClass::kExpand;
}

double contract(const Vector& g, const Matrix& H, const Vector& s, double lambda,
                const TraceConfig& config) {
  const double step = s.norm();
  if (lambda < config.sigma_lo * step) {
    const double lambda_hat = lambda + std::sqrt(config.sigma_lo * g.norm());
    const auto s1 = solve_shifted(g, H, lambda_hat);
    if (!s1) throw std::runtime_error("contract: shifted system is indefinite");
    const double n1 = s1->norm();
    if (lambda_hat / n1 <= config.sigma_hi) return n1;
    const LambdaSearchResult s2 =
        find_lambda_in_range(g, H, lambda, lambda_hat, config.sigma_lo, config.sigma_hi);
    return s2.s.norm();
  }
  const auto s3 = solve_shifted(g, H, config.gamma_lambda * lambda);
  if (!s3) throw std::runtime_error("contract: shifted system is indefinite");
  return std::max(s3->norm(), config.gamma_C * step);
}

TraceState trace_update(const TraceState& state, StepClass cls, const Vector& g, const Matrix& H,
                        const TraceConfig& config) {
  TraceState next = state;
  const double step = state.s.norm();
  switch (cls) {
    case StepClass::kAcceptSigma:
    case StepClass::kAcceptDelta:
      next.x = state.x + state.s;
      next.Delta = std::max(state.Delta, config.gamma_E * step);
      next.delta = std::min(next.Delta, std::max(state.delta, config.gamma_E * step));
      next.sigma = std::max(state.sigma, state.lambda / step);
      break;
    case StepClass::kContract:
      next.delta = contract(g, H, state.s, state.lambda, config);
      break;
    case StepClass::kExpand:
      next.delta = std::min(state.Delta, state.lambda / state.sigma);
      break;
  }
  return next;
}

void StepClassCounts::add(StepClass cls) {
  switch (cls) {
    case StepClass::kAcceptSigma: ++accept_sigma; break;
    case StepClass::kAcceptDelta: ++accept_delta; break;
    case StepClass::kContract: ++contract; break;
    case StepClass::kExpand: ++expand; break;
  }
}

namespace {

// Model data at the current x together with the trial-point evaluation.
struct Trial {
  ConsistentAscentResult at_x;
  Vector y_plus;
  double P_before = 0.0;
  double P_after = 0.0;
  double rho = 0.0;
  long iterations = 0;
};

Trial evaluate(const MinimaxProblem& problem, const Vector& x, const Vector& y,
               const ConsistencyConstants& cc, double delta) {
  Trial t;
  t.at_x = ascend_consistent(problem, x, y, cc,
                             [delta](const Vector& g, const Matrix& H) {
                               return solve_trs(g, H, delta);
                             });
  t.iterations = t.at_x.iterations;
  t.P_before = problem.value(x, t.at_x.y);
  const double step = t.at_x.step.s.norm();
  if (step > 0.0) {
    const Vector x_trial = x + t.at_x.step.s;
    const AscentResult refined = ascend(problem, x_trial, t.at_x.y,
                                        AscentSchedule::tolerance(t.at_x.accuracy_bound));
    t.y_plus = refined.y;
    t.iterations += refined.iterations;
    t.P_after = problem.value(x_trial, t.y_plus);
    t.rho = compute_rho(t.P_before, t.P_after, step);
  } else {
    t.y_plus = t.at_x.y;
    t.P_after = t.P_before;
  }
  return t;
}

}  // namespace

TraceResult run_minimax_trace(const MinimaxProblem& problem, const Vector& x0,
                              const Vector& y_init, const TraceConfig& config) {
  config.validate();
  const WallClock clock;
  ConsistencyConstants cc;
  cc.C1 = config.C1;
  cc.C2 = config.C2;
  cc.M2 = config.M2.value_or(0.5 * std::sqrt(config.eps));

  TraceResult result;
  SspCertificate& cert = result.certificate;
  cert.grad_norm_bound = config.eps;
  cert.hessian_eigen_bound = -std::sqrt(config.eps);

  TraceState st;
  st.x = x0;
  st.delta = config.delta0;
  st.Delta = config.Delta0;
  st.sigma = config.sigma0;

  Trial trial = evaluate(problem, st.x, y_init, cc, st.delta);
  long pending_inner = trial.iterations;
  long t = 0;
  for (;; ++t) {
    const ConsistentAscentResult& m = trial.at_x;
    st.y = m.y;
    st.s = m.step.s;
    st.lambda = m.step.nu;
    st.rho = trial.rho;
    const double step = st.s.norm();
    const double grad_norm = m.g.norm();

    IterationRecord row;
    row.iter = t;
    row.wall_time_s = clock.seconds();
    row.surrogate_P = trial.P_before;
    row.true_P_gap = true_gap(problem, st.x);
    row.grad_norm = grad_norm;
    row.step_norm = step;
    row.lambda = st.lambda;
    row.delta = st.delta;
    row.inner_iters = pending_inner;
    cert.total_inner_iterations += pending_inner;

    const bool stationary = grad_norm <= 0.5 * config.eps &&
                            min_eigenvalue(m.H) >= -0.5 * std::sqrt(config.eps);
    if (stationary || step == 0.0) {
      cert.terminated_by_dual = true;
      row.step_norm = 0.0;
      if (config.record_trajectory) result.trajectory.push_back(row);
      break;
    }
    if (t >= config.max_outer || clock.seconds() > config.max_wall_s) {
      cert.budget_exhausted = true;
      if (config.record_trajectory) result.trajectory.push_back(row);
      break;
    }

    const StepClass cls = classify(st.rho, config.eta, st.lambda, st.sigma, step, st.Delta);
    result.counts.add(cls);
    row.rho = st.rho;
    row.step_class = cls;
    if (config.record_trajectory) result.trajectory.push_back(row);
    result.steps.push_back(TraceStep{t, st.delta, st.Delta, st.sigma, st.lambda, step, st.rho,
                                     grad_norm, cls, st.x});

    const Vector y_plus = trial.y_plus;
    TraceState next = trace_update(st, cls, m.g, m.H, config);
    if (is_accept(cls)) next.y = y_plus;
    cert.outer_iterations = t + 1;
    st = next;

    trial = evaluate(problem, st.x, st.y, cc, st.delta);
    pending_inner = trial.iterations;
    // The post-contraction σ update is skipped once the budget is spent.
    const double next_step = trial.at_x.step.s.norm();
    if (cls == StepClass::kContract && t + 1 < config.max_outer && next_step > 0.0) {
      st.sigma = std::max(st.sigma, trial.at_x.step.nu / next_step);
    }
  }
  cert.x = st.x;
  return result;
}

}  // namespace minimax
