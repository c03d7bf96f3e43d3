#include "minimax/trajectory.hpp"

#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace minimax {

std::string_view to_string(StepClass cls) {
  switch (cls) {
    case StepClass::kAcceptSigma: return "ACCEPT_SIGMA";
    case StepClass::kAcceptDelta: return "ACCEPT_DELTA";
    case StepClass::kContract: return "CONTRACT";
    case StepClass::kExpand: return "EXPAND";
  }
  return "";
}

std::optional<StepClass> parse_step_class(std::string_view text) {
  for (StepClass c : {StepClass::kAcceptSigma, StepClass::kAcceptDelta, StepClass::kContract,
                      StepClass::kExpand}) {
    if (text == to_string(c)) return c;
  }
  return std::nullopt;
}

std::string format_double(double value) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

namespace {

std::string cell(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }

std::vector<std::string> split_row(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_double(const std::string& s, long line_no) {
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    // from_chars rejects "inf"/"nan" spellings on some libraries; fall back.
    try {
      size_t used = 0;
      v = std::stod(s, &used);
      if (used == s.size()) return v;
    } catch (const std::exception&) {
    }
    throw std::runtime_error("trajectory line " + std::to_string(line_no) + ": bad number '" + s +
                             "'");
  }
  return v;
}

long parse_long(const std::string& s, long line_no) {
  long v = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw std::runtime_error("trajectory line " + std::to_string(line_no) + ": bad integer '" + s +
                             "'");
  }
  return v;
}

std::optional<double> parse_optional(const std::string& s, long line_no) {
  if (s.empty()) return std::nullopt;
  return parse_double(s, line_no);
}

}  // namespace

void write_trajectory_csv(std::ostream& out, const Trajectory& rows) {
  out << kTrajectoryHeader << '\n';
  for (const auto& r : rows) {
    out << r.iter << ',' << format_double(r.wall_time_s) << ',' << format_double(r.surrogate_P)
        << ',' << cell(r.true_P_gap) << ',' << format_double(r.grad_norm) << ','
        << format_double(r.step_norm) << ',' << cell(r.lambda) << ',' << cell(r.delta) << ','
        << cell(r.rho) << ',' << (r.step_class ? to_string(*r.step_class) : "") << ','
        << r.inner_iters << '\n';
  }
}

Trajectory read_trajectory_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kTrajectoryHeader) {
    throw std::runtime_error("trajectory: missing or unexpected header");
  }
  Trajectory rows;
  long line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto f = split_row(line);
    if (f.size() != 11) {
      throw std::runtime_error("trajectory line " + std::to_string(line_no) + ": expected 11 fields");
    }
    IterationRecord r;
    r.iter = parse_long(f[0], line_no);
    r.wall_time_s = parse_double(f[1], line_no);
    r.surrogate_P = parse_double(f[2], line_no);
    r.true_P_gap = parse_optional(f[3], line_no);
    r.grad_norm = parse_double(f[4], line_no);
    r.step_norm = parse_double(f[5], line_no);
    r.lambda = parse_optional(f[6], line_no);
    r.delta = parse_optional(f[7], line_no);
    r.rho = parse_optional(f[8], line_no);
    if (!f[9].empty()) {
      r.step_class = parse_step_class(f[9]);
      if (!r.step_class) {
        throw std::runtime_error("trajectory line " + std::to_string(line_no) +
                                 ": unknown step class '" + f[9] + "'");
      }
    }
    r.inner_iters = parse_long(f[10], line_no);
    if (!rows.empty() && r.iter <= rows.back().iter) {
      throw std::runtime_error("trajectory line " + std::to_string(line_no) +
                               ": iter not increasing");
    }
    rows.push_back(r);
  }
  return rows;
}

std::optional<double> true_gap(const MinimaxProblem& problem, const Vector& x) {
  const auto p_star = problem.optimal_value();
  if (!p_star) return std::nullopt;
  const auto p = primal_value(problem, x);
  if (!p) return std::nullopt;
  return *p - *p_star;
}

}  // namespace minimax
