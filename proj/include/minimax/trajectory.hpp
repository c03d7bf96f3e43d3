#pragma once

#include <chrono>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "minimax/problem.hpp"

namespace minimax {

enum class StepClass { kAcceptSigma, kAcceptDelta, kContract, kExpand };

std::string_view to_string(StepClass cls);
std::optional<StepClass> parse_step_class(std::string_view text);
inline bool is_accept(StepClass cls) {
  return cls == StepClass::kAcceptSigma || cls == StepClass::kAcceptDelta;
}

/**
 * One trajectory row. Optional fields are written as empty CSV cells.
 * `lambda` holds the dual quantity the algorithm itself tests: the scaled
 * 2ν/H_Lip for MINIMAX-TR, the raw TRS multiplier for MINIMAX-TRACE and
 * the cubic multiplier (M/2)‖s‖ for MCN.
 */
struct IterationRecord {
  long iter = 0;
  double wall_time_s = 0.0;
  double surrogate_P = 0.0;
  std::optional<double> true_P_gap;
  double grad_norm = 0.0;
  double step_norm = 0.0;
  std::optional<double> lambda;
  std::optional<double> delta;
  std::optional<double> rho;
  std::optional<StepClass> step_class;
  long inner_iters = 0;
};

using Trajectory = std::vector<IterationRecord>;

inline constexpr std::string_view kTrajectoryHeader =
    "iter,wall_time_s,surrogate_P,true_P_gap,grad_norm,step_norm,lambda,delta,rho,step_class,"
    "inner_iters";

/// Shortest decimal string that parses back to exactly `value`.
std::string format_double(double value);

void write_trajectory_csv(std::ostream& out, const Trajectory& rows);

/// Parses a trajectory written by write_trajectory_csv. Throws
/// std::runtime_error naming the line on a malformed row or header.
Trajectory read_trajectory_csv(std::istream& in);

/// P(x) − P* when both the closed-form maximizer and the optimal value exist.
std::optional<double> true_gap(const MinimaxProblem& problem, const Vector& x);

class WallClock {
 public:
  WallClock() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

}  // namespace minimax
