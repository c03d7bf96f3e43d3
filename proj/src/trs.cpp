#include "minimax/trs.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

namespace minimax {

namespace {

constexpr int kMaxSecularIterations = 200;

// H in its eigenbasis, eigenvalues ascending.
struct Spectrum {
  Vector eigenvalues;
  Matrix basis;
  Vector g_hat;      // basisᵀ g
  int leading = 1;   // size of the leftmost eigenvalue cluster
  double scale = 1;  // max(1, |λ|_max)

  double lambda_min() const { return eigenvalues(0); }
};

void check_symmetric(const Matrix& H, double tol) {
  if (H.rows() != H.cols()) throw std::invalid_argument("Hessian must be square");
  const double scale = std::max(1.0, H.cwiseAbs().maxCoeff());
  if ((H - H.transpose()).cwiseAbs().maxCoeff() > tol * scale) {
    throw std::invalid_argument("Hessian is not symmetric");
  }
}

Spectrum decompose(const Vector& g, const Matrix& H) {
  if (g.size() != H.rows()) throw std::invalid_argument("gradient/Hessian size mismatch");
  Spectrum sp;
  const Matrix sym = 0.5 * (H + H.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> eig(sym);
  sp.eigenvalues = eig.eigenvalues();
  sp.basis = eig.eigenvectors();
  sp.g_hat = sp.basis.transpose() * g;
  sp.scale = std::max(1.0, sp.eigenvalues.cwiseAbs().maxCoeff());
  const double cluster_tol = 1e-10 * sp.scale;
  sp.leading = 1;
  while (sp.leading < sp.eigenvalues.size() &&
         sp.eigenvalues(sp.leading) - sp.eigenvalues(0) <= cluster_tol) {
    ++sp.leading;
  }
  return sp;
}

// ‖s(nu)‖ and its derivative, with s(nu)_i = −ĝ_i / (λ_i + nu). Components
// with index < skip are left out.
struct NormEval {
  double norm = 0.0;
  double derivative = 0.0;
};

NormEval shifted_norm(const Spectrum& sp, double nu, int skip = 0) {
  double sq = 0.0, d = 0.0;
  for (int i = skip; i < sp.eigenvalues.size(); ++i) {
    const double denom = sp.eigenvalues(i) + nu;
    const double gi = sp.g_hat(i);
    if (gi == 0.0) continue;
    const double q = gi / denom;
    sq += q * q;
    d += q * q / denom;
  }
  NormEval out;
  out.norm = std::sqrt(sq);
  out.derivative = out.norm > 0.0 ? -d / out.norm : 0.0;
  return out;
}

Vector shifted_step_hat(const Spectrum& sp, double nu, int skip = 0) {
  Vector s = Vector::Zero(sp.eigenvalues.size());
  for (int i = skip; i < sp.eigenvalues.size(); ++i) {
    if (sp.g_hat(i) != 0.0) s(i) = -sp.g_hat(i) / (sp.eigenvalues(i) + nu);
  }
  return s;
}

// Unit vector in the leading eigenspace along which to complete a hard-case
// step, in eigen coordinates. Follows −ĝ when that component is meaningful,
// otherwise the first leading eigenvector with a positive first nonzero entry.
Vector hard_case_direction(const Spectrum& sp) {
  const int n = static_cast<int>(sp.eigenvalues.size());
  Vector dir = Vector::Zero(n);
  const double lead_norm = sp.g_hat.head(sp.leading).norm();
  if (lead_norm > 1e-12 * std::max(1.0, sp.g_hat.norm())) {
    dir.head(sp.leading) = -sp.g_hat.head(sp.leading) / lead_norm;
    return dir;
  }
  const Vector v = sp.basis.col(0);
  double sign = 1.0;
  for (int i = 0; i < n; ++i) {
    if (std::abs(v(i)) > 1e-12) {
      sign = v(i) > 0.0 ? 1.0 : -1.0;
      break;
    }
  }
  dir(0) = sign;
  return dir;
}

// Rescales ŝ to the target norm, preferring to adjust only the leading
// block when it dominates so that the other stationarity rows stay exact.
void fix_norm(const Spectrum& sp, Vector& s_hat, double target) {
  const double current = s_hat.norm();
  if (current == 0.0 || current == target) return;
  const double lead_sq = s_hat.head(sp.leading).squaredNorm();
  const double rest_sq = s_hat.squaredNorm() - lead_sq;
  if (lead_sq >= 0.5 * target * target && target * target > rest_sq) {
    s_hat.head(sp.leading) *= std::sqrt(target * target - rest_sq) / std::sqrt(lead_sq);
  } else {
    s_hat *= target / current;
  }
}

// Safeguarded Newton for an increasing function on (lo, hi] with a root
// inside; `eval` returns {value, derivative}.
template <typename F>
double bracketed_newton(F eval, double lo, double hi, double rel_tol) {
  double x = hi;
  for (int it = 0; it < kMaxSecularIterations; ++it) {
    const auto [f, df] = eval(x);
    if (std::abs(f) <= rel_tol) return x;
    if (f < 0.0) {
      lo = x;
    } else {
      hi = x;
    }
    double next = (df > 0.0 && std::isfinite(df)) ? x - f / df : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(hi))) {
      return next;
    }
    x = next;
  }
  return x;
}

double kkt_residual(const Vector& g, const Matrix& H, const Vector& s, double nu, double delta,
                    double lambda_min) {
  const Vector r = H * s + nu * s + g;
  const double stationarity = r.norm() / (g.norm() + 1.0);
  const double curvature = std::max(0.0, -(lambda_min + nu));
  const double complementarity = std::abs(nu * (delta - s.norm()));
  const double feasibility = std::max(0.0, s.norm() - delta) / delta;
  return std::max({stationarity, curvature, complementarity, feasibility});
}

}  // namespace

double model_value(const Vector& g, const Matrix& H, const Vector& s) {
  return g.dot(s) + 0.5 * s.dot(H * s);
}

TrsSolution solve_trs(const Vector& g, const Matrix& H, double delta, double tol) {
  if (!(delta > 0.0)) throw std::invalid_argument("solve_trs: delta must be positive");
  check_symmetric(H, tol);
  const Spectrum sp = decompose(g, H);
  const double lam1 = sp.lambda_min();
  TrsSolution out;
  Vector s_hat;

  // Interior Newton step.
  if (lam1 > 0.0) {
    s_hat = shifted_step_hat(sp, 0.0);
    if (s_hat.norm() <= delta) {
      out.s = sp.basis * s_hat;
      out.nu = 0.0;
      out.kkt_residual = kkt_residual(g, H, out.s, 0.0, delta, lam1);
      return out;
    }
  }

  const double nu_floor = std::max(0.0, -lam1);
  const double probe = nu_floor + 1e-12 * std::max(sp.scale, nu_floor);
  const bool degenerate = lam1 <= 1e-10 * sp.scale;  // λ_min ≤ 0 up to roundoff
  if (degenerate && shifted_norm(sp, probe).norm <= delta) {
    // Hard case: ĝ has no usable component along the leftmost eigenspace.
    s_hat = shifted_step_hat(sp, nu_floor, sp.leading);
    const double rest = s_hat.norm();
    if (nu_floor > 0.0) {
      const double tau = std::sqrt(std::max(0.0, delta * delta - rest * rest));
      s_hat += tau * hard_case_direction(sp);
      out.on_boundary = true;
      out.hard_case = true;
    }
    out.nu = nu_floor;
  } else {
    double hi = std::max(nu_floor, g.norm() / delta - lam1);
    hi = hi * (1.0 + 1e-12) + 1e-300;
    auto eval = [&](double nu) {
      const NormEval e = shifted_norm(sp, nu);
      // ψ(nu) = 1/‖s(nu)‖ − 1/delta, scaled by delta.
      const double f = delta / e.norm - 1.0;
      const double df = -delta * e.derivative / (e.norm * e.norm);
      return std::pair<double, double>{f, df};
    };
    out.nu = bracketed_newton(eval, nu_floor, hi, 1e-15);
    s_hat = shifted_step_hat(sp, out.nu);
    fix_norm(sp, s_hat, delta);
    out.on_boundary = true;
  }
  out.s = sp.basis * s_hat;
  out.kkt_residual = kkt_residual(g, H, out.s, out.nu, delta, lam1);
  return out;
}

std::optional<Vector> solve_shifted(const Vector& g, const Matrix& H, double lambda) {
  Matrix shifted = 0.5 * (H + H.transpose());
  shifted.diagonal().array() += lambda;
  Eigen::LLT<Matrix> llt(shifted);
  if (llt.info() != Eigen::Success) return std::nullopt;
  const Vector diag = Matrix(llt.matrixL()).diagonal();
  if ((diag.array() <= 0.0).any()) return std::nullopt;
  return Vector(-llt.solve(g));
}

LambdaSearchResult find_lambda_in_range(const Vector& g, const Matrix& H, double lambda_lo,
                                        double lambda_hi, double sigma_lo, double sigma_hi) {
  if (!(lambda_lo < lambda_hi) || !(sigma_lo <= sigma_hi)) {
    throw std::invalid_argument("find_lambda_in_range: empty bracket");
  }
  auto ratio_at = [&](double lambda, Vector& s) -> std::optional<double> {
    auto step = solve_shifted(g, H, lambda);
    if (!step) return std::nullopt;
    s = std::move(*step);
    const double norm = s.norm();
    return norm > 0.0 ? lambda / norm : std::numeric_limits<double>::infinity();
  };

  Vector s_lo, s_hi;
  // The lower endpoint may sit exactly on the singular shift (hard case);
  // the ratio there is then not defined and the check is skipped.
  if (auto r_lo = ratio_at(lambda_lo, s_lo); r_lo && !(*r_lo < sigma_lo)) {
    throw std::invalid_argument("find_lambda_in_range: ratio at lambda_lo is not below sigma_lo");
  }
  const auto r_hi = ratio_at(lambda_hi, s_hi);
  if (!r_hi) throw std::invalid_argument("find_lambda_in_range: H + lambda_hi I is indefinite");
  if (!(*r_hi > sigma_hi)) {
    throw std::invalid_argument("find_lambda_in_range: ratio at lambda_hi is not above sigma_hi");
  }

  LambdaSearchResult out;
  double lo = lambda_lo, hi = lambda_hi;
  for (int it = 1; it <= 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    Vector s;
    const auto r = ratio_at(mid, s);
    out.bisections = it;
    if (!r) {
      lo = mid;
      continue;
    }
    if (*r >= sigma_lo && *r <= sigma_hi) {
      out.lambda = mid;
      out.s = std::move(s);
      return out;
    }
    if (*r < sigma_lo) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  out.converged = false;
  out.lambda = lambda_hi;
  out.s = s_hi;
  return out;
}

CubicSolution solve_cubic(const Vector& g, const Matrix& H, double M) {
  if (!(M > 0.0)) throw std::invalid_argument("solve_cubic: M must be positive");
  check_symmetric(H, 1e-10);
  const Spectrum sp = decompose(g, H);
  const double lam1 = sp.lambda_min();
  CubicSolution out;

  const double nu_floor = std::max(0.0, -lam1);
  Vector s_hat;
  const double probe = nu_floor + 1e-12 * std::max(sp.scale, nu_floor);
  if (lam1 < 0.0 && shifted_norm(sp, probe).norm <= 2.0 * probe / M) {
    // Hard case: complete the step along the leftmost eigenvector so that
    // ‖s‖ = 2 nu / M with nu = −λ_min.
    s_hat = shifted_step_hat(sp, nu_floor, sp.leading);
    const double radius = 2.0 * nu_floor / M;
    const double rest = s_hat.norm();
    s_hat += std::sqrt(std::max(0.0, radius * radius - rest * rest)) * hard_case_direction(sp);
    out.nu = nu_floor;
    out.hard_case = true;
  } else if (g.norm() == 0.0) {
    s_hat = Vector::Zero(g.size());
    out.nu = 0.0;
  } else {
    // ν = (M/2)‖s(ν)‖; solve 1/‖s(ν)‖ − M/(2ν) = 0, increasing in ν.
    const double hi =
        (0.5 * (-lam1 + std::sqrt(lam1 * lam1 + 2.0 * M * g.norm()))) * (1.0 + 1e-12) + 1e-300;
    auto eval = [&](double nu) {
      const NormEval e = shifted_norm(sp, nu);
      const double target = 2.0 * nu / M;
      const double f = (target - e.norm) / std::max(target, e.norm);
      const double df = (2.0 / M - e.derivative) / std::max(target, e.norm);
      return std::pair<double, double>{f, df};
    };
    out.nu = bracketed_newton(eval, nu_floor, std::max(hi, nu_floor), 1e-15);
    s_hat = shifted_step_hat(sp, out.nu);
  }
  out.s = sp.basis * s_hat;
  return out;
}

double cubic_model_value(const Vector& g, const Matrix& H, double M, const Vector& s) {
  const double r = s.norm();
  return model_value(g, H, s) + M / 6.0 * r * r * r;
}

}  // namespace minimax
