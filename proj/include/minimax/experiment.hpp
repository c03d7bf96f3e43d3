#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "minimax/problem.hpp"
#include "minimax/trajectory.hpp"

namespace minimax {

using Json = nlohmann::json;

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class AlgorithmKind { kMinimaxTr, kMinimaxTrace, kGda, kMcn };

std::string_view to_string(AlgorithmKind kind);

struct AlgorithmSpec {
  std::string name;
  AlgorithmKind kind = AlgorithmKind::kMinimaxTr;
  Json settings = Json::object();
};

struct RunSettings {
  std::uint64_t seed = 0;
  double wall_budget_s = 60.0;
  int parallel = 1;
};

/**
 * Parsed experiment description.
 *
 *   problem:    {kind: du | quadratic | scalar_square, parameters...,
 *                x0: number | array, constants: {ell, rho}}
 *   algorithms: [{name, kind: minimax_tr | minimax_trace | gda | mcn, settings}]
 *   run:        {seed, wall_budget_s, parallel}
 *
 * Algorithm settings use the field names of the solver config structs;
 * unknown keys are rejected.
 */
struct ExperimentConfig {
  Json problem;
  std::vector<AlgorithmSpec> algorithms;
  RunSettings run;
};

/// Throws ConfigError naming the offending field.
ExperimentConfig parse_experiment_config(const Json& doc);
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

std::shared_ptr<const MinimaxProblem> build_problem(const Json& problem_section);
Vector initial_x(const Json& problem_section, int dim_x);
/// Seeded standard-normal y0 shared by every algorithm of a batch.
Vector initial_y(std::uint64_t seed, int dim_y);

struct RunOutcome {
  std::string name;
  AlgorithmKind kind = AlgorithmKind::kMinimaxTr;
  bool ok = false;
  std::string error;
  Trajectory trajectory;
  Json summary;
};

/// Runs one algorithm; failures are captured in the outcome, never thrown.
RunOutcome run_single(const MinimaxProblem& problem, const Vector& x0, const Vector& y0,
                      const AlgorithmSpec& spec, const ExperimentConfig& config);

/**
 * Runs every configured algorithm (up to `parallel` at once) and writes
 * <name>.csv, <name>.summary.json and index.json into out_dir. Files are
 * written by the calling thread after the runs finish.
 */
std::vector<RunOutcome> run_experiment(const ExperimentConfig& config,
                                       const std::filesystem::path& out_dir);

/// Finite-difference report plus, for the Du benchmark, the stationary-point
/// catalog and the ν identity. "pass" summarizes the checks.
Json check_problem(const ExperimentConfig& config);

/**
 * Re-derives the certificate of a recorded run: parses the trajectory, reads
 * x_final from the sibling <name>.summary.json and evaluates the analytic
 * ‖∇P‖ and λ_min(∇²P) there.
 */
Json certify_run(const std::filesystem::path& trajectory_csv, const ExperimentConfig& config);

}  // namespace minimax
