#include "rmdopt/stiefel_cayley.hpp"

namespace rmdopt {

namespace {
constexpr double kSkewTol = 1e-12;
}

SkewMatrix::SkewMatrix(Matrix W) : W_(std::move(W)) {
  if (W_.rows() != W_.cols()) {
    throw DimensionMismatch("SkewMatrix: must be square");
  }
  const double res = (W_ + W_.transpose()).norm();
  if (!(res <= kSkewTol * std::max(1.0, W_.norm()))) {
    throw DomainViolation("SkewMatrix: ||W + W^T||_F = " +
                          std::to_string(res));
  }
}

std::pair<SkewMatrix, StiefelTangent> riemannian_gradient_stiefel(
    const StiefelPoint& X, const Matrix& G_euclid) {
  if (G_euclid.rows() != X.n() || G_euclid.cols() != X.p()) {
    throw DimensionMismatch("riemannian_gradient_stiefel: shape mismatch");
  }
  // A - A^T is antisymmetric exactly in floating point.
  const Matrix A = G_euclid * X.matrix().transpose();
  Matrix W = A - A.transpose();
  Matrix grad = W * X.matrix();
  return {SkewMatrix(std::move(W)), StiefelTangent(X, std::move(grad))};
}

StiefelPoint cayley(const SkewMatrix& W) {
  const Index n = W.n();
  const Matrix I = Matrix::Identity(n, n);
  return StiefelPoint(solve_dense(I - W.matrix(), I + W.matrix()));
}

SkewMatrix cayley_inverse(const StiefelPoint& Xo) {
  if (Xo.n() != Xo.p()) {
    throw DimensionMismatch("cayley_inverse: point must be square");
  }
  const Index n = Xo.n();
  const Matrix I = Matrix::Identity(n, n);
  const Matrix& X = Xo.matrix();
  // (X - I)(X + I)^{-1} via the transposed system.
  Matrix St;
  try {
    St = solve_dense((X + I).transpose(), (X - I).transpose());
  } catch (const SingularMatrix&) {
    throw OutOfChart("cayley_inverse: X + I is singular");
  }
  return SkewMatrix(St.transpose());
}

StiefelPoint cgd_update(const StiefelPoint& X, const SkewMatrix& W,
                        double eta) {
  if (W.n() != X.n()) {
    throw DimensionMismatch("cgd_update: W and X disagree on n");
  }
  const Index n = X.n();
  const Matrix I = Matrix::Identity(n, n);
  const Matrix half = (eta / 2.0) * W.matrix();
  return StiefelPoint(solve_dense(I + half, (I - half) * X.matrix()));
}

StiefelPoint cgd_update_smw(const StiefelPoint& X, const Matrix& G_euclid,
                            double eta) {
  const Index n = X.n();
  const Index p = X.p();
  if (G_euclid.rows() != n || G_euclid.cols() != p) {
    throw DimensionMismatch("cgd_update_smw: shape mismatch");
  }
  if (2 * p >= n) {
    return cgd_update(X, riemannian_gradient_stiefel(X, G_euclid).first, eta);
  }

  Matrix U(n, 2 * p);
  U.leftCols(p) = G_euclid;
  U.rightCols(p) = X.matrix();
  Matrix V(n, 2 * p);
  V.leftCols(p) = X.matrix();
  V.rightCols(p) = -G_euclid;

  const Matrix VtX = V.transpose() * X.matrix();
  const Matrix small =
      Matrix::Identity(2 * p, 2 * p) + (eta / 2.0) * (V.transpose() * U);
  return StiefelPoint(X.matrix() - eta * (U * solve_dense(small, VtX)));
}

}  // namespace rmdopt
