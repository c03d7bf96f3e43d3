#include "minimax/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <random>
#include <set>
#include <thread>

#include "minimax/baselines.hpp"
#include "minimax/du_function.hpp"
#include "minimax/minimax_tr.hpp"
#include "minimax/minimax_trace.hpp"
#include "minimax/quadratic.hpp"

namespace minimax {

std::string_view to_string(AlgorithmKind kind) {
  switch (kind) {
    case AlgorithmKind::kMinimaxTr: return "minimax_tr";
    case AlgorithmKind::kMinimaxTrace: return "minimax_trace";
    case AlgorithmKind::kGda: return "gda";
    case AlgorithmKind::kMcn: return "mcn";
  }
  return "";
}

namespace {

// Reads fields from a JSON object and rejects any key left unread.
class FieldReader {
 public:
  FieldReader(const Json& obj, std::string where) : obj_(obj), where_(std::move(where)) {
    if (!obj_.is_object()) throw ConfigError(where_ + ": expected an object");
  }

  template <typename T>
  std::optional<T> get(const std::string& key) {
    seen_.insert(key);
    if (!obj_.contains(key) || obj_.at(key).is_null()) return std::nullopt;
    try {
      return obj_.at(key).get<T>();
    } catch (const Json::exception&) {
      throw ConfigError(where_ + "." + key + ": wrong type");
    }
  }

  template <typename T>
  T get_or(const std::string& key, T fallback) {
    return get<T>(key).value_or(fallback);
  }

  void finish() const {
    for (auto it = obj_.begin(); it != obj_.end(); ++it) {
      if (!seen_.count(it.key())) throw ConfigError(where_ + ": unknown field '" + it.key() + "'");
    }
  }

 private:
  const Json& obj_;
  std::string where_;
  std::set<std::string> seen_;
};

AlgorithmKind parse_kind(const std::string& s, const std::string& where) {
  for (AlgorithmKind k : {AlgorithmKind::kMinimaxTr, AlgorithmKind::kMinimaxTrace,
                          AlgorithmKind::kGda, AlgorithmKind::kMcn}) {
    if (s == to_string(k)) return k;
  }
  throw ConfigError(where + ".kind: unknown algorithm '" + s + "'");
}

double positive(double v, const std::string& field) {
  if (!(v > 0.0)) throw ConfigError(field + ": must be positive");
  return v;
}

TrConfig tr_config(const Json& s, double wall) {
  FieldReader r(s, "settings");
  TrConfig c;
  c.eps = positive(r.get_or("eps", c.eps), "settings.eps");
  c.eps1 = r.get<double>("eps1");
  c.eps2 = r.get<double>("eps2");
  c.radius = r.get<double>("radius");
  c.max_outer = r.get<long>("max_outer");
  c.record_trajectory = r.get_or("record_trajectory", true);
  c.max_wall_s = r.get_or("max_wall_s", wall);
  r.finish();
  return c;
}

TraceConfig trace_config(const Json& s, double wall) {
  FieldReader r(s, "settings");
  TraceConfig c;
  c.eta = r.get_or("eta", c.eta);
  c.gamma_C = r.get_or("gamma_C", c.gamma_C);
  c.gamma_E = r.get_or("gamma_E", c.gamma_E);
  c.gamma_lambda = r.get_or("gamma_lambda", c.gamma_lambda);
  c.sigma_lo = r.get_or("sigma_lo", c.sigma_lo);
  c.sigma_hi = r.get_or("sigma_hi", c.sigma_hi);
  c.delta0 = r.get_or("delta0", c.delta0);
  c.Delta0 = r.get_or("Delta0", c.Delta0);
  c.sigma0 = r.get_or("sigma0", c.sigma0);
  c.max_outer = r.get_or("max_outer", c.max_outer);
  c.eps = r.get_or("eps", c.eps);
  c.C1 = r.get_or("C1", c.C1);
  c.C2 = r.get_or("C2", c.C2);
  c.M2 = r.get<double>("M2");
  c.record_trajectory = r.get_or("record_trajectory", true);
  c.max_wall_s = r.get_or("max_wall_s", wall);
  r.finish();
  try {
    c.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return c;
}

GdaConfig gda_config(const Json& s, double wall) {
  FieldReader r(s, "settings");
  GdaConfig c;
  c.eta_x = r.get<double>("eta_x");
  c.eta_y = r.get<double>("eta_y");
  c.max_iter = r.get_or("max_iter", c.max_iter);
  c.grad_tol = r.get_or("grad_tol", c.grad_tol);
  c.record_stride = r.get_or("record_stride", c.record_stride);
  c.max_wall_s = r.get_or("max_wall_s", wall);
  r.finish();
  return c;
}

McnConfig mcn_config(const Json& s, double wall) {
  FieldReader r(s, "settings");
  McnConfig c;
  c.M = r.get<double>("M");
  c.eps = positive(r.get_or("eps", c.eps), "settings.eps");
  c.eps1 = r.get<double>("eps1");
  c.eps2 = r.get<double>("eps2");
  c.max_outer = r.get_or("max_outer", c.max_outer);
  c.record_trajectory = r.get_or("record_trajectory", true);
  c.max_wall_s = r.get_or("max_wall_s", wall);
  r.finish();
  return c;
}

// Validates a settings object by parsing it once.
void check_settings(const AlgorithmSpec& spec) {
  switch (spec.kind) {
    case AlgorithmKind::kMinimaxTr: tr_config(spec.settings, 1.0); break;
    case AlgorithmKind::kMinimaxTrace: trace_config(spec.settings, 1.0); break;
    case AlgorithmKind::kGda: gda_config(spec.settings, 1.0); break;
    case AlgorithmKind::kMcn: mcn_config(spec.settings, 1.0); break;
  }
}

struct DuSpec {
  DuFunctionParams params;
  int dim_y = 5;
  DuConstantsOverride constants;
};

DuSpec parse_du(const Json& p) {
  FieldReader r(p, "problem");
  r.get<std::string>("kind");
  r.get<Json>("x0");
  DuSpec d;
  d.params.n = r.get_or("n", d.params.n);
  d.params.L = r.get_or("L", d.params.L);
  d.params.gamma = r.get_or("gamma", d.params.gamma);
  d.dim_y = r.get_or("dim_y", d.dim_y);
  if (auto c = r.get<Json>("constants")) {
    FieldReader cr(*c, "problem.constants");
    d.constants.ell = cr.get<double>("ell");
    d.constants.rho = cr.get<double>("rho");
    cr.finish();
  }
  r.finish();
  return d;
}

QuadraticOptions parse_quadratic(const Json& p) {
  FieldReader r(p, "problem");
  r.get<std::string>("kind");
  r.get<Json>("x0");
  QuadraticOptions o;
  o.seed = r.get_or<std::uint64_t>("seed", o.seed);
  o.n = r.get_or("n", o.n);
  o.m = r.get_or("m", o.m);
  o.mu = r.get_or("mu", o.mu);
  o.coupling_scale = r.get_or("coupling_scale", o.coupling_scale);
  o.quartic = r.get_or("quartic", o.quartic);
  o.a_shift = r.get_or("a_shift", o.a_shift);
  if (auto c = r.get<Json>("constants")) {
    FieldReader cr(*c, "problem.constants");
    o.ell = cr.get<double>("ell");
    o.rho = cr.get_or("rho", o.rho);
    cr.finish();
  }
  r.finish();
  return o;
}

std::optional<double> opt_double(const Json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<double>();
}

Json vec_json(const Vector& v) {
  Json arr = Json::array();
  for (int i = 0; i < v.size(); ++i) arr.push_back(v(i));
  return arr;
}

Json opt_json(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

std::string file_stem(const std::string& name) {
  std::string out = name;
  for (char& ch : out) {
    if (!(std::isalnum(static_cast<unsigned char>(ch)) || ch == '-' || ch == '_' || ch == '.')) {
      ch = '_';
    }
  }
  return out;
}

// Analytic certificate at x: ‖∇P‖ and λ_min(∇²P) when y* is known.
Json analytic_certificate(const MinimaxProblem& problem, const Vector& x, double grad_bound,
                          std::optional<double> eig_bound) {
  Json cert;
  const auto grad = primal_gradient(problem, x);
  const auto hess = primal_hessian(problem, x);
  cert["grad_norm"] = grad ? Json(grad->norm()) : Json(nullptr);
  cert["lambda_min"] = hess ? Json(min_eigenvalue(*hess)) : Json(nullptr);
  cert["grad_norm_bound"] = grad_bound;
  cert["hessian_eigen_bound"] = opt_json(eig_bound);
  cert["grad_ok"] = grad ? Json(grad->norm() <= grad_bound) : Json(nullptr);
  cert["hessian_ok"] =
      (hess && eig_bound) ? Json(min_eigenvalue(*hess) >= *eig_bound) : Json(nullptr);
  return cert;
}

}  // namespace

ExperimentConfig parse_experiment_config(const Json& doc) {
  if (!doc.is_object()) throw ConfigError("config: expected a JSON object");
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    if (it.key() != "problem" && it.key() != "algorithms" && it.key() != "run") {
      throw ConfigError("config: unknown section '" + it.key() + "'");
    }
  }
  if (!doc.contains("problem")) throw ConfigError("config: missing field 'problem'");
  if (!doc.contains("algorithms") || !doc.at("algorithms").is_array() ||
      doc.at("algorithms").empty()) {
    throw ConfigError("config: missing field 'algorithms' (need a non-empty list)");
  }
  ExperimentConfig cfg;
  cfg.problem = doc.at("problem");
  if (!cfg.problem.is_object() || !cfg.problem.contains("kind")) {
    throw ConfigError("problem: missing field 'kind'");
  }
  build_problem(cfg.problem);  // validates parameters

  std::set<std::string> names;
  for (size_t k = 0; k < doc.at("algorithms").size(); ++k) {
    const Json& a = doc.at("algorithms")[k];
    const std::string where = "algorithms[" + std::to_string(k) + "]";
    FieldReader r(a, where);
    AlgorithmSpec spec;
    const auto kind = r.get<std::string>("kind");
    if (!kind) throw ConfigError(where + ": missing field 'kind'");
    spec.kind = parse_kind(*kind, where);
    spec.name = r.get_or<std::string>("name", std::string(to_string(spec.kind)));
    spec.settings = r.get_or<Json>("settings", Json::object());
    r.finish();
    if (!names.insert(spec.name).second) throw ConfigError(where + ": duplicate name " + spec.name);
    check_settings(spec);
    cfg.algorithms.push_back(std::move(spec));
  }

  if (doc.contains("run")) {
    FieldReader r(doc.at("run"), "run");
    cfg.run.seed = r.get_or<std::uint64_t>("seed", cfg.run.seed);
    cfg.run.wall_budget_s = positive(r.get_or("wall_budget_s", cfg.run.wall_budget_s),
                                     "run.wall_budget_s");
    cfg.run.parallel = std::max(1, r.get_or("parallel", cfg.run.parallel));
    r.finish();
  }
  return cfg;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ConfigError("config " + path.string() + ": " + e.what());
  }
  return parse_experiment_config(doc);
}

std::shared_ptr<const MinimaxProblem> build_problem(const Json& p) {
  const std::string kind = p.value("kind", "");
  try {
    if (kind == "du") {
      const DuSpec d = parse_du(p);
      return build_du_minimax(d.params, d.dim_y, d.constants);
    }
    if (kind == "quadratic") return build_quadratic_minimax(parse_quadratic(p));
    if (kind == "scalar_square") {
      FieldReader r(p, "problem");
      r.get<std::string>("kind");
      r.get<Json>("x0");
      r.finish();
      return build_scalar_square_minimax();
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("problem: ") + e.what());
  }
  throw ConfigError("problem.kind: unknown problem '" + kind + "'");
}

Vector initial_x(const Json& p, int dim_x) {
  if (!p.contains("x0")) return Vector::Constant(dim_x, 1e-3);
  const Json& x0 = p.at("x0");
  if (x0.is_number()) return Vector::Constant(dim_x, x0.get<double>());
  if (!x0.is_array() || static_cast<int>(x0.size()) != dim_x) {
    throw ConfigError("problem.x0: expected a number or an array of length " +
                      std::to_string(dim_x));
  }
  Vector x(dim_x);
  for (int i = 0; i < dim_x; ++i) x(i) = x0[i].get<double>();
  return x;
}

Vector initial_y(std::uint64_t seed, int dim_y) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector y(dim_y);
  for (int i = 0; i < dim_y; ++i) y(i) = normal(rng);
  return y;
}

RunOutcome run_single(const MinimaxProblem& problem, const Vector& x0, const Vector& y0,
                      const AlgorithmSpec& spec, const ExperimentConfig& config) {
  RunOutcome out;
  out.name = spec.name;
  out.kind = spec.kind;
  const double wall = config.run.wall_budget_s;
  const WallClock clock;

  Json s;
  s["name"] = spec.name;
  s["algorithm"] = std::string(to_string(spec.kind));
  s["initial_gap"] = opt_json(true_gap(problem, x0));
  s["step_class_counts"] = nullptr;
  try {
    Vector x_final;
    switch (spec.kind) {
      case AlgorithmKind::kMinimaxTr:
      case AlgorithmKind::kMcn: {
        TrResult r;
        if (spec.kind == AlgorithmKind::kMinimaxTr) {
          r = run_minimax_tr(problem, x0, y0, tr_config(spec.settings, wall));
        } else {
          r = run_mcn(problem, x0, y0, mcn_config(spec.settings, wall));
        }
        x_final = r.certificate.x;
        out.trajectory = std::move(r.trajectory);
        s["outer_iterations"] = r.certificate.outer_iterations;
        s["total_inner_iterations"] = r.certificate.total_inner_iterations;
        s["terminated_by_dual"] = r.certificate.terminated_by_dual;
        s["budget_exhausted"] = r.certificate.budget_exhausted;
        s["certificate"] = analytic_certificate(problem, x_final, r.certificate.grad_norm_bound,
                                                r.certificate.hessian_eigen_bound);
        break;
      }
      case AlgorithmKind::kMinimaxTrace: {
        TraceResult r = run_minimax_trace(problem, x0, y0, trace_config(spec.settings, wall));
        x_final = r.certificate.x;
        out.trajectory = std::move(r.trajectory);
        s["outer_iterations"] = r.certificate.outer_iterations;
        s["total_inner_iterations"] = r.certificate.total_inner_iterations;
        s["terminated_by_dual"] = r.certificate.terminated_by_dual;
        s["budget_exhausted"] = r.certificate.budget_exhausted;
        s["step_class_counts"] = {{"ACCEPT_SIGMA", r.counts.accept_sigma},
                                  {"ACCEPT_DELTA", r.counts.accept_delta},
                                  {"CONTRACT", r.counts.contract},
                                  {"EXPAND", r.counts.expand}};
        s["certificate"] = analytic_certificate(problem, x_final, r.certificate.grad_norm_bound,
                                                r.certificate.hessian_eigen_bound);
        break;
      }
      case AlgorithmKind::kGda: {
        const GdaConfig gc = gda_config(spec.settings, wall);
        GdaResult r = run_gda(problem, x0, y0, gc);
        x_final = r.x;
        out.trajectory = std::move(r.trajectory);
        s["outer_iterations"] = r.iterations;
        s["total_inner_iterations"] = r.iterations;
        s["terminated_by_dual"] = false;
        s["budget_exhausted"] = !r.converged;
        s["certificate"] = analytic_certificate(problem, x_final, gc.grad_tol, std::nullopt);
        break;
      }
    }
    const auto initial = true_gap(problem, x0);
    const auto final_gap = true_gap(problem, x_final);
    s["final_gap"] = opt_json(final_gap);
    s["final_surrogate_P"] =
        out.trajectory.empty() ? Json(nullptr) : Json(out.trajectory.back().surrogate_P);
    s["plateau"] = (initial && final_gap) ? Json(*final_gap >= 0.9 * *initial) : Json(nullptr);
    s["x_final"] = vec_json(x_final);
    s["status"] = "ok";
    s["error"] = nullptr;
    out.ok = true;
  } catch (const std::exception& e) {
    s["status"] = "error";
    s["error"] = e.what();
    out.error = e.what();
  }
  s["wall_time_s"] = clock.seconds();
  s["config"] = {{"problem", config.problem},
                 {"algorithm", {{"name", spec.name},
                                {"kind", std::string(to_string(spec.kind))},
                                {"settings", spec.settings}}},
                 {"run", {{"seed", config.run.seed},
                          {"wall_budget_s", config.run.wall_budget_s},
                          {"parallel", config.run.parallel}}}};
  out.summary = std::move(s);
  return out;
}

std::vector<RunOutcome> run_experiment(const ExperimentConfig& config,
                                       const std::filesystem::path& out_dir) {
  const auto problem = build_problem(config.problem);
  const Vector x0 = initial_x(config.problem, problem->dim_x());
  const Vector y0 = initial_y(config.run.seed, problem->dim_y());

  std::vector<RunOutcome> outcomes(config.algorithms.size());
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t k = next++; k < outcomes.size(); k = next++) {
      outcomes[k] = run_single(*problem, x0, y0, config.algorithms[k], config);
    }
  };
  const int threads =
      std::min<int>(config.run.parallel, static_cast<int>(config.algorithms.size()));
  std::vector<std::thread> pool;
  for (int k = 1; k < threads; ++k) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  std::filesystem::create_directories(out_dir);
  Json index;
  index["problem"] = config.problem;
  index["seed"] = config.run.seed;
  index["runs"] = Json::array();
  for (const auto& o : outcomes) {
    const std::string stem = file_stem(o.name);
    {
      std::ofstream csv(out_dir / (stem + ".csv"));
      write_trajectory_csv(csv, o.trajectory);
    }
    {
      std::ofstream js(out_dir / (stem + ".summary.json"));
      js << o.summary.dump(2) << '\n';
    }
    index["runs"].push_back({{"name", o.name},
                             {"algorithm", std::string(to_string(o.kind))},
                             {"trajectory", stem + ".csv"},
                             {"summary", stem + ".summary.json"},
                             {"status", o.ok ? "ok" : "error"}});
  }
  std::ofstream idx(out_dir / "index.json");
  idx << index.dump(2) << '\n';
  return outcomes;
}

Json check_problem(const ExperimentConfig& config) {
  const auto problem = build_problem(config.problem);
  const int n = problem->dim_x();
  const int m = problem->dim_y();
  Json report;
  bool pass = true;

  std::mt19937_64 rng(config.run.seed);
  const bool is_du = config.problem.at("kind") == "du";
  DuFunctionParams du;
  if (is_du) du = parse_du(config.problem).params;
  std::normal_distribution<double> normal(0.0, 1.0);

  double worst = 0.0;
  const int samples = 20;
  for (int k = 0; k < samples; ++k) {
    Vector x(n), y(m);
    if (is_du) {
      x = du_random_domain_point(du, rng);
    } else {
      for (int i = 0; i < n; ++i) x(i) = normal(rng);
    }
    for (int j = 0; j < m; ++j) y(j) = normal(rng);
    worst = std::max(worst, finite_difference_check(*problem, x, y).max_error());
  }
  report["finite_difference"] = {{"samples", samples}, {"max_error", worst},
                                 {"tolerance", 1e-5}, {"pass", worst <= 1e-5}};
  pass = pass && worst <= 1e-5;

  if (is_du) {
    Json cat = Json::array();
    const auto pts = du_stationary_points(du);
    for (size_t k = 0; k < pts.size(); ++k) {
      const DuEvaluation e = du_value_grad_hess(pts[k], du);
      const double lmin = min_eigenvalue(e.hess);
      const bool minimizer = k + 1 == pts.size();
      const bool ok = e.grad.norm() <= 1e-8 && (minimizer ? lmin > 0.0 : lmin < 0.0);
      pass = pass && ok;
      cat.push_back({{"index", k}, {"grad_norm", e.grad.norm()}, {"lambda_min", lmin},
                     {"kind", minimizer ? "minimum" : "saddle"}, {"pass", ok}});
    }
    report["stationary_points"] = cat;
    const double nu_closed = du.nu();
    const double nu_def = du_nu_from_h1(du);
    const double rel = std::abs(nu_closed - nu_def) / std::abs(nu_def);
    report["nu"] = {{"closed_form", nu_closed}, {"from_h1", nu_def}, {"relative_error", rel},
                    {"pass", rel <= 1e-10}};
    pass = pass && rel <= 1e-10;
  }
  const ProblemConstants& c = problem->constants();
  report["constants"] = {{"ell", c.ell},     {"mu", c.mu},     {"rho", c.rho},
                         {"kappa", c.kappa}, {"L_P", c.L_P},   {"L_H", c.L_H},
                         {"H_Lip", c.H_Lip}, {"P_lower", std::isfinite(c.P_lower)
                                                                 ? Json(c.P_lower)
                                                                 : Json(nullptr)}};
  report["pass"] = pass;
  return report;
}

Json certify_run(const std::filesystem::path& trajectory_csv, const ExperimentConfig& config) {
  std::ifstream in(trajectory_csv);
  if (!in) throw std::runtime_error("cannot open trajectory " + trajectory_csv.string());
  const Trajectory rows = read_trajectory_csv(in);
  if (rows.empty()) throw std::runtime_error("trajectory " + trajectory_csv.string() + " is empty");

  std::filesystem::path summary_path = trajectory_csv;
  summary_path.replace_extension(".summary.json");
  std::ifstream sin(summary_path);
  if (!sin) throw std::runtime_error("cannot open summary " + summary_path.string());
  const Json summary = Json::parse(sin);
  if (!summary.contains("x_final")) {
    throw std::runtime_error("summary " + summary_path.string() + " has no x_final");
  }

  const auto problem = build_problem(config.problem);
  const Json& xs = summary.at("x_final");
  if (static_cast<int>(xs.size()) != problem->dim_x()) {
    throw std::runtime_error("x_final dimension does not match the configured problem");
  }
  Vector x(problem->dim_x());
  for (int i = 0; i < x.size(); ++i) x(i) = xs[i].get<double>();

  const Json& recorded = summary.at("certificate");
  const double grad_bound = recorded.at("grad_norm_bound").get<double>();
  Json out = analytic_certificate(*problem, x, grad_bound,
                                  opt_double(recorded.at("hessian_eigen_bound")));
  out["trajectory"] = trajectory_csv.string();
  out["rows"] = rows.size();
  const auto gap = true_gap(*problem, x);
  out["final_gap"] = opt_json(gap);
  out["recorded_final_gap"] = rows.back().true_P_gap ? Json(*rows.back().true_P_gap) : Json(nullptr);
  out["gap_consistent"] = (gap && rows.back().true_P_gap)
                              ? Json(std::abs(*gap - *rows.back().true_P_gap) <=
                                     1e-9 * (1.0 + std::abs(*gap)))
                              : Json(nullptr);
  return out;
}

}  // namespace minimax
