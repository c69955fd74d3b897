#pragma once

#include "rmdopt/dense.hpp"

namespace rmdopt {

inline constexpr double kStiefelFeasTol = 1e-8;
inline constexpr double kSphereFeasTol = 1e-10;

/// Point on St(n,p) = { X in R^{n x p} : X^T X = I_p }.
/// Construction rejects matrices with ||X^T X - I||_F > 1e-8.
class StiefelPoint {
 public:
  explicit StiefelPoint(Matrix X);

  const Matrix& matrix() const { return X_; }
  Index n() const { return X_.rows(); }
  Index p() const { return X_.cols(); }

  /// ||X^T X - I_p||_F, recomputed from the stored matrix.
  double feasibility_residual() const;

 private:
  Matrix X_;
};

/// Tangent vector at a Stiefel point: X^T Z + Z^T X = 0 within 1e-8.
class StiefelTangent {
 public:
  StiefelTangent(StiefelPoint base, Matrix Z);

  const StiefelPoint& base() const { return base_; }
  const Matrix& matrix() const { return Z_; }

 private:
  StiefelPoint base_;
  Matrix Z_;
};

/// Unit vector in R^d (||x|| = 1 within 1e-10).
class SpherePoint {
 public:
  explicit SpherePoint(Vector x);

  const Vector& vector() const { return x_; }
  Index dim() const { return x_.size(); }

 private:
  Vector x_;
};

/// Tangent vector at a sphere point: <x, v> = 0 within 1e-10.
class SphereTangent {
 public:
  SphereTangent(SpherePoint base, Vector v);

  const SpherePoint& base() const { return base_; }
  const Vector& vector() const { return v_; }

 private:
  SpherePoint base_;
  Vector v_;
};

/// Canonical-metric inner product tr(A^T (I - X X^T / 2) B).
/// Throws BaseMismatch when A and B are not anchored at the same X.
double stiefel_canonical_inner(const StiefelPoint& X, const StiefelTangent& A,
                               const StiefelTangent& B);

/// Projection of an ambient matrix onto the tangent space at X:
/// Z = M - X (X^T M + M^T X) / 2. Fixed point on tangent inputs.
StiefelTangent stiefel_project_tangent(const StiefelPoint& X, const Matrix& M);

/// Exponential map on the unit sphere: cos(||v||) x + sin(||v||) v / ||v||.
SpherePoint sphere_exp(const SpherePoint& x, const SphereTangent& v);

/// Inverse of the sphere exponential map (the log map). Throws OutOfChart
/// for antipodal y (the cut locus of x).
SphereTangent sphere_log(const SpherePoint& x, const SpherePoint& y);

/// Projection retraction (x + v) / ||x + v||.
/// Throws DegenerateInput when ||x + v|| < 1e-12.
SpherePoint sphere_retract(const SpherePoint& x, const SphereTangent& v);

}  // namespace rmdopt
