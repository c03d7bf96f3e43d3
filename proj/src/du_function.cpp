#include "minimax/du_function.hpp"

#include <algorithm>
#include <stdexcept>

namespace minimax {

double DuFunctionParams::nu() const { return (37.0 * L + 13.0 * gamma) * tau * tau / 6.0; }

void DuFunctionParams::validate() const {
  if (n < 1) throw std::invalid_argument("Du function: n must be >= 1");
  if (!(L > 0.0) || !(gamma > 0.0)) throw std::invalid_argument("Du function: L, gamma must be > 0");
}

Poly1 du_h1(double x, const DuFunctionParams& p) {
  const double t = p.tau;
  const double a = -14.0 * p.L + 10.0 * p.gamma;
  const double b = 5.0 * p.L - 3.0 * p.gamma;
  const double d = x - t;
  return {-p.gamma * x * x + a * d * d * d / (3.0 * t) + b * d * d * d * d / (2.0 * t * t),
          -2.0 * p.gamma * x + a * d * d / t + 2.0 * b * d * d * d / (t * t),
          -2.0 * p.gamma + 2.0 * a * d / t + 6.0 * b * d * d / (t * t)};
}

Poly1 du_h2(double x, const DuFunctionParams& p) {
  const double t = p.tau;
  const double c = p.L + p.gamma;
  const double u = (x - 2.0 * t) / t;
  const double u2 = u * u, u3 = u2 * u;
  return {-p.gamma - c * (10.0 * u3 + 15.0 * u2 * u2 + 6.0 * u3 * u2),
          -c / t * (30.0 * u2 + 60.0 * u3 + 30.0 * u2 * u2),
          -c / (t * t) * (60.0 * u + 180.0 * u2 + 120.0 * u3)};
}

double du_nu_from_h1(const DuFunctionParams& p) {
  return -du_h1(2.0 * p.tau, p).value + 4.0 * p.L * p.tau * p.tau;
}

RegionIndex classify_region(const Vector& x, const DuFunctionParams& p) {
  const double t = p.tau;
  RegionIndex r{p.n + 1, 1};
  for (int k = 0; k < p.n; ++k) {
    const double xc = std::clamp(x(k), 0.0, 6.0 * t);
    if (xc < 2.0 * t) {
      r.i = k + 1;
      r.branch = xc <= t ? 1 : 2;
      break;
    }
  }
  return r;
}

DuEvaluation du_value_grad_hess(const Vector& x, const DuFunctionParams& p, bool want_grad,
                                bool want_hess) {
  if (x.size() != p.n) throw std::invalid_argument("du_value_grad_hess: dimension mismatch");
  const double t = p.tau;
  const double L = p.L;
  const int n = p.n;
  const RegionIndex r = classify_region(x, p);
  const int i = r.i - 1;  // 0-based pivot; i == n for the final region

  DuEvaluation out;
  if (want_grad) out.grad = Vector::Zero(n);
  if (want_hess) out.hess = Matrix::Zero(n, n);

  auto quad = [&](int j, double center) {
    const double d = x(j) - center;
    out.value += L * d * d;
    if (want_grad) out.grad(j) = 2.0 * L * d;
    if (want_hess) out.hess(j, j) = 2.0 * L;
  };

  for (int j = 0; j < std::min(i, n); ++j) quad(j, 4.0 * t);
  out.value -= static_cast<double>(std::min(i, n)) * p.nu();
  if (i == n) return out;

  int suffix_start = i + 1;
  if (r.branch == 1) {
    out.value -= p.gamma * x(i) * x(i);
    if (want_grad) out.grad(i) = -2.0 * p.gamma * x(i);
    if (want_hess) out.hess(i, i) = -2.0 * p.gamma;
  } else {
    const Poly1 h1 = du_h1(x(i), p);
    out.value += h1.value;
    if (want_grad) out.grad(i) = h1.d1;
    if (want_hess) out.hess(i, i) = h1.d2;
    if (i + 1 < n) {
      const Poly1 h2 = du_h2(x(i), p);
      const double z = x(i + 1);
      out.value += h2.value * z * z;
      if (want_grad) {
        out.grad(i) += h2.d1 * z * z;
        out.grad(i + 1) = 2.0 * h2.value * z;
      }
      if (want_hess) {
        out.hess(i, i) += h2.d2 * z * z;
        out.hess(i, i + 1) = out.hess(i + 1, i) = 2.0 * h2.d1 * z;
        out.hess(i + 1, i + 1) = 2.0 * h2.value;
      }
      suffix_start = i + 2;
    }
  }
  for (int j = suffix_start; j < n; ++j) quad(j, 0.0);
  return out;
}

std::vector<Vector> du_stationary_points(const DuFunctionParams& p) {
  std::vector<Vector> pts;
  for (int k = 0; k <= p.n; ++k) {
    Vector x = Vector::Zero(p.n);
    x.head(k).setConstant(4.0 * p.tau);
    pts.push_back(x);
  }
  return pts;
}

Vector du_random_domain_point(const DuFunctionParams& p, std::mt19937_64& rng) {
  const double t = p.tau;
  std::uniform_int_distribution<int> pick(0, p.n);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const int i = pick(rng);
  Vector x(p.n);
  for (int j = 0; j < p.n; ++j) {
    if (j < i) {
      x(j) = 2.0 * t + 4.0 * t * unit(rng);
    } else if (j == i) {
      x(j) = 2.0 * t * unit(rng);
    } else {
      x(j) = t * unit(rng);
    }
  }
  return x;
}

namespace {

class DuMinimax final : public MinimaxProblem {
 public:
  DuMinimax(const DuFunctionParams& p, int dim_y, const ProblemConstants& c)
      : p_(p), m_(dim_y), c_(c) {}

  int dim_x() const override { return p_.n; }
  int dim_y() const override { return m_; }
  double value(const Vector& x, const Vector& y) const override {
    return du_value_grad_hess(x, p_, false, false).value - 0.5 * y.squaredNorm();
  }
  Vector grad_x(const Vector& x, const Vector&) const override {
    return du_value_grad_hess(x, p_, true, false).grad;
  }
  Vector grad_y(const Vector&, const Vector& y) const override { return -y; }
  Matrix hess_xx(const Vector& x, const Vector&) const override {
    return du_value_grad_hess(x, p_, false, true).hess;
  }
  Matrix hess_xy(const Vector&, const Vector&) const override { return Matrix::Zero(p_.n, m_); }
  Matrix hess_yy(const Vector&, const Vector&) const override {
    return -Matrix::Identity(m_, m_);
  }
  const ProblemConstants& constants() const override { return c_; }
  std::optional<Vector> optimal_y(const Vector&) const override { return Vector::Zero(m_); }
  std::optional<double> optimal_value() const override { return -p_.n * p_.nu(); }

 private:
  DuFunctionParams p_;
  int m_;
  ProblemConstants c_;
};

}  // namespace

std::shared_ptr<const MinimaxProblem> build_du_minimax(const DuFunctionParams& p, int dim_y,
                                                       const DuConstantsOverride& constants) {
  p.validate();
  if (dim_y < 1) throw std::invalid_argument("build_du_minimax: dim_y must be >= 1");
  const double ell = constants.ell.value_or(20.0 * p.L * (p.n + 1));
  const double rho = constants.rho.value_or(200.0 * (p.L + p.gamma) / p.tau);
  return std::make_shared<DuMinimax>(p, dim_y, derive_constants(ell, 1.0, rho, -p.n * p.nu()));
}

}  // namespace minimax
