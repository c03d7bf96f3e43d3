#include "minimax/quadratic.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

namespace minimax {

QuadraticMinimax::QuadraticMinimax(Matrix A, Matrix B, Matrix C, double quartic,
                                   const ProblemConstants& constants)
    : A_(std::move(A)), B_(std::move(B)), C_(std::move(C)), q_(quartic), c_(constants) {
  if (A_.rows() != A_.cols() || C_.rows() != C_.cols() || B_.rows() != A_.rows() ||
      B_.cols() != C_.rows()) {
    throw std::invalid_argument("QuadraticMinimax: inconsistent block sizes");
  }
  Eigen::LLT<Matrix> llt(C_);
  if (llt.info() != Eigen::Success) throw ConcavityViolation("QuadraticMinimax: C is not PD");
  schur_ = A_ + B_ * llt.solve(B_.transpose());
  schur_ = 0.5 * (schur_ + schur_.transpose());
  bounded_below_ = q_ >= 0.0 && min_eigenvalue(schur_) >= 0.0;
  if (!bounded_below_) c_.P_lower = -std::numeric_limits<double>::infinity();
}

double QuadraticMinimax::value(const Vector& x, const Vector& y) const {
  return 0.5 * x.dot(A_ * x) + 0.25 * q_ * x.array().pow(4).sum() + x.dot(B_ * y) -
         0.5 * y.dot(C_ * y);
}

Vector QuadraticMinimax::grad_x(const Vector& x, const Vector& y) const {
  return A_ * x + q_ * x.array().cube().matrix() + B_ * y;
}

Vector QuadraticMinimax::grad_y(const Vector& x, const Vector& y) const {
  return B_.transpose() * x - C_ * y;
}

Matrix QuadraticMinimax::hess_xx(const Vector& x, const Vector&) const {
  Matrix H = A_;
  H.diagonal() += 3.0 * q_ * x.array().square().matrix();
  return H;
}

Matrix QuadraticMinimax::hess_xy(const Vector&, const Vector&) const { return B_; }

Matrix QuadraticMinimax::hess_yy(const Vector&, const Vector&) const { return -C_; }

std::optional<Vector> QuadraticMinimax::optimal_y(const Vector& x) const {
  return Vector(C_.llt().solve(B_.transpose() * x));
}

std::optional<double> QuadraticMinimax::optimal_value() const {
  if (!bounded_below_) return std::nullopt;
  return 0.0;
}

std::shared_ptr<const QuadraticMinimax> build_quadratic_minimax(const QuadraticOptions& o) {
  if (!(o.mu > 0.0)) throw std::invalid_argument("build_quadratic_minimax: mu must be positive");
  if (o.n < 1 || o.m < 1) throw std::invalid_argument("build_quadratic_minimax: empty dimensions");
  std::mt19937_64 rng(o.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  auto draw = [&](int r, int c) {
    Matrix M(r, c);
    for (int j = 0; j < c; ++j)
      for (int i = 0; i < r; ++i) M(i, j) = normal(rng);
    return M;
  };
  const Matrix G = draw(o.n, o.n);
  Matrix A = 0.5 * (G + G.transpose()) / std::sqrt(static_cast<double>(o.n));
  A.diagonal().array() += o.a_shift;
  const Matrix B = o.coupling_scale * draw(o.n, o.m) / std::sqrt(static_cast<double>(o.m));
  const Matrix W = draw(o.m, o.m);
  Matrix C = W * W.transpose() / static_cast<double>(o.m);
  C = 0.5 * (C + C.transpose());
  C.diagonal().array() += o.mu;

  const double mu = min_eigenvalue(C);
  double ell = 0.0;
  if (o.ell) {
    ell = *o.ell;
  } else {
    Matrix full(o.n + o.m, o.n + o.m);
    full << A, B, B.transpose(), -C;
    Eigen::SelfAdjointEigenSolver<Matrix> eig(full, Eigen::EigenvaluesOnly);
    ell = std::max(eig.eigenvalues().cwiseAbs().maxCoeff(), mu);
  }
  return std::make_shared<QuadraticMinimax>(A, B, C, o.quartic,
                                            derive_constants(ell, mu, o.rho, 0.0));
}

std::shared_ptr<const QuadraticMinimax> build_scalar_square_minimax() {
  Matrix one = Matrix::Ones(1, 1);
  return std::make_shared<QuadraticMinimax>(one, one, one, 0.0,
                                            derive_constants(1.0, 1.0, 0.125, 0.0));
}

}  // namespace minimax
