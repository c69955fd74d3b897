#include "rmdopt/manifolds.hpp"

#include <cmath>

namespace rmdopt {

StiefelPoint::StiefelPoint(Matrix X) : X_(std::move(X)) {
  if (X_.rows() < X_.cols() || X_.cols() < 1) {
    throw DimensionMismatch("StiefelPoint: need n >= p >= 1, got " +
                            std::to_string(X_.rows()) + "x" +
                            std::to_string(X_.cols()));
  }
  if (!is_finite(X_)) {
    throw InfeasiblePoint("StiefelPoint: non-finite entries");
  }
  const double res = feasibility_residual();
  if (!(res <= kStiefelFeasTol)) {
    throw InfeasiblePoint("StiefelPoint: ||X^T X - I||_F = " +
                          std::to_string(res) + " exceeds 1e-8");
  }
}

double StiefelPoint::feasibility_residual() const {
  const Index p = X_.cols();
  return (X_.transpose() * X_ - Matrix::Identity(p, p)).norm();
}

StiefelTangent::StiefelTangent(StiefelPoint base, Matrix Z)
    : base_(std::move(base)), Z_(std::move(Z)) {
  if (Z_.rows() != base_.n() || Z_.cols() != base_.p()) {
    throw DimensionMismatch("StiefelTangent: shape mismatch with base");
  }
  const Matrix& X = base_.matrix();
  const Matrix S = X.transpose() * Z_;
  const double res = (S + S.transpose()).norm();
  if (!(res <= kStiefelFeasTol)) {
    throw TangentMismatch("StiefelTangent: ||X^T Z + Z^T X||_F = " +
                          std::to_string(res) + " exceeds 1e-8");
  }
}

SpherePoint::SpherePoint(Vector x) : x_(std::move(x)) {
  if (x_.size() < 1) {
    throw DimensionMismatch("SpherePoint: empty vector");
  }
  const double res = std::abs(x_.norm() - 1.0);
  if (!is_finite(x_) || !(res <= kSphereFeasTol)) {
    throw InfeasiblePoint("SpherePoint: | ||x|| - 1 | = " +
                          std::to_string(res) + " exceeds 1e-10");
  }
}

SphereTangent::SphereTangent(SpherePoint base, Vector v)
    : base_(std::move(base)), v_(std::move(v)) {
  if (v_.size() != base_.dim()) {
    throw DimensionMismatch("SphereTangent: dimension mismatch with base");
  }
  const double ip = std::abs(base_.vector().dot(v_));
  if (!(ip <= kSphereFeasTol * std::max(1.0, v_.norm()))) {
    throw TangentMismatch("SphereTangent: <x, v> = " + std::to_string(ip));
  }
}

namespace {
bool same_base(const Matrix& A, const Matrix& B) {
  return A.rows() == B.rows() && A.cols() == B.cols() && A == B;
}
}  // namespace

double stiefel_canonical_inner(const StiefelPoint& X, const StiefelTangent& A,
                               const StiefelTangent& B) {
  if (!same_base(A.base().matrix(), X.matrix()) ||
      !same_base(B.base().matrix(), X.matrix())) {
    throw BaseMismatch("stiefel_canonical_inner: tangents anchored elsewhere");
  }
  const Matrix& Xm = X.matrix();
  const Matrix& Am = A.matrix();
  const Matrix& Bm = B.matrix();
  // tr(A^T B) - tr((X^T A)^T (X^T B)) / 2 avoids forming the n x n projector.
  const double full = (Am.array() * Bm.array()).sum();
  const Matrix XtA = Xm.transpose() * Am;
  const Matrix XtB = Xm.transpose() * Bm;
  return full - 0.5 * (XtA.array() * XtB.array()).sum();
}

StiefelTangent stiefel_project_tangent(const StiefelPoint& X,
                                       const Matrix& M) {
  if (M.rows() != X.n() || M.cols() != X.p()) {
    throw DimensionMismatch("stiefel_project_tangent: shape mismatch");
  }
  const Matrix& Xm = X.matrix();
  const Matrix S = Xm.transpose() * M;
  Matrix Z = M - 0.5 * Xm * (S + S.transpose());
  return StiefelTangent(X, std::move(Z));
}

SpherePoint sphere_exp(const SpherePoint& x, const SphereTangent& v) {
  if (!(x.vector() == v.base().vector())) {
    throw BaseMismatch("sphere_exp: tangent anchored elsewhere");
  }
  const double norm = v.vector().norm();
  if (norm == 0.0) {
    return x;
  }
  Vector y = std::cos(norm) * x.vector() + std::sin(norm) / norm * v.vector();
  y.normalize();
  return SpherePoint(std::move(y));
}

SphereTangent sphere_log(const SpherePoint& x, const SpherePoint& y) {
  if (x.dim() != y.dim()) {
    throw DimensionMismatch("sphere_log: dimension mismatch");
  }
  const double c = x.vector().dot(y.vector());
  Vector perp = y.vector() - c * x.vector();
  const double s = perp.norm();
  // atan2 keeps the angle well conditioned near theta = 0.
  const double theta = std::atan2(s, c);
  if (s < 1e-14) {
    if (c < 0.0) {
      throw OutOfChart("sphere_log: antipodal point is outside the chart");
    }
    return SphereTangent(x, Vector::Zero(x.dim()));
  }
  return SphereTangent(x, (theta / s) * perp);
}

SpherePoint sphere_retract(const SpherePoint& x, const SphereTangent& v) {
  if (!(x.vector() == v.base().vector())) {
    throw BaseMismatch("sphere_retract: tangent anchored elsewhere");
  }
  Vector sum = x.vector() + v.vector();
  const double norm = sum.norm();
  if (norm < 1e-12) {
    throw DegenerateInput("sphere_retract: ||x + v|| < 1e-12");
  }
  return SpherePoint(sum / norm);
}

}  // namespace rmdopt
