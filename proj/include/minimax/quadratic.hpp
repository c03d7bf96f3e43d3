#pragma once

#include <cstdint>
#include <memory>
#include <optional>

#include "minimax/problem.hpp"

namespace minimax {

/**
 * f(x, y) = ½xᵀAx + (q/4) Σ x_i⁴ + xᵀBy − ½yᵀCy with C ≻ 0, so that
 *
 *   y*(x) = C⁻¹Bᵀx,   P(x) = ½xᵀ(A + BC⁻¹Bᵀ)x + (q/4) Σ x_i⁴.
 */
class QuadraticMinimax final : public MinimaxProblem {
 public:
  QuadraticMinimax(Matrix A, Matrix B, Matrix C, double quartic, const ProblemConstants& constants);

  int dim_x() const override { return static_cast<int>(A_.rows()); }
  int dim_y() const override { return static_cast<int>(C_.rows()); }
  double value(const Vector& x, const Vector& y) const override;
  Vector grad_x(const Vector& x, const Vector& y) const override;
  Vector grad_y(const Vector& x, const Vector& y) const override;
  Matrix hess_xx(const Vector& x, const Vector& y) const override;
  Matrix hess_xy(const Vector& x, const Vector& y) const override;
  Matrix hess_yy(const Vector& x, const Vector& y) const override;
  const ProblemConstants& constants() const override { return c_; }
  std::optional<Vector> optimal_y(const Vector& x) const override;
  /// 0 when A + BC⁻¹Bᵀ ⪰ 0 and q ≥ 0 (minimum at x = 0); empty otherwise.
  std::optional<double> optimal_value() const override;

  const Matrix& A() const { return A_; }
  const Matrix& B() const { return B_; }
  const Matrix& C() const { return C_; }
  double quartic() const { return q_; }
  /// A + BC⁻¹Bᵀ.
  const Matrix& schur() const { return schur_; }

 private:
  Matrix A_, B_, C_;
  double q_;
  ProblemConstants c_;
  Matrix schur_;
  bool bounded_below_;
};

struct QuadraticOptions {
  std::uint64_t seed = 0;
  int n = 3;
  int m = 2;
  double mu = 1.0;
  double coupling_scale = 1.0;
  double quartic = 0.0;
  double a_shift = 0.0;  // added to the diagonal of A
  std::optional<double> ell;  // default: spectral norm of the quadratic part's Hessian
  double rho = 1.0;
};

/**
 * Seeded instance: A = sym(G)/√n + a_shift I, B = coupling_scale G'/√m,
 * C = mu I + WWᵀ/m with standard normal G, G', W. μ is set to λ_min(C).
 */
std::shared_ptr<const QuadraticMinimax> build_quadratic_minimax(const QuadraticOptions& opts);

/// f = ½x² + xy − ½y², so P(x) = x², with ell = mu = 1 and rho = 1/8 (H_Lip = 1).
std::shared_ptr<const QuadraticMinimax> build_scalar_square_minimax();

}  // namespace minimax
