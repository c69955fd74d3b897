#include "rmdopt/mirror.hpp"

#include <cmath>

namespace rmdopt {

EuclideanMirror make_euclidean_mirror(const Potential& p, Vector base_point) {
  if (!p.in_domain(base_point)) {
    throw DomainViolation("make_euclidean_mirror: base point outside domain");
  }
  EuclideanMirror m(std::move(base_point));
  const Vector base = m.base_point;
  m.forward = [p](const Vector& x) { return potential_grad(p, x); };
  m.diff_at_base = [p, base](const Vector& v) {
    return p.hessian_apply(base, v);
  };
  m.dual_retract = [](const Vector& y, const Vector& w) -> Vector {
    return y + w;
  };
  m.inverse = [p](const Vector& y) { return potential_conj_grad(p, y); };
  return m;
}

SphereExpMirror make_exp_mirror(const SpherePoint& x_t, double radius) {
  if (!(radius > 0.0)) {
    throw ConfigError("make_exp_mirror: radius must be positive");
  }
  SphereExpMirror m(x_t);
  m.validity_radius = radius;
  m.forward = [x_t](const SpherePoint& x) -> Vector {
    return sphere_log(x_t, x).vector();
  };
  m.diff_at_base = [](const Vector& v) { return v; };
  m.dual_retract = [](const Vector& y, const Vector& w) -> Vector {
    return y + w;
  };
  m.inverse = [x_t, radius](const Vector& v) -> SpherePoint {
    if (!(v.norm() < radius)) {
      throw OutOfChart("exp mirror: dual point outside the chart ball");
    }
    return sphere_exp(x_t, SphereTangent(x_t, v));
  };
  m.check_tangent = [](const SpherePoint& x, const Vector& v) {
    const double ip = std::abs(x.vector().dot(v));
    if (!(ip <= 1e-8 * std::max(1.0, v.norm()))) {
      throw TangentMismatch("exp mirror: gradient not tangent, <x,v> = " +
                            std::to_string(ip));
    }
  };
  return m;
}

CayleyMirror make_cayley_mirror(const StiefelPoint& X0) {
  if (X0.n() != X0.p()) {
    throw DimensionMismatch("make_cayley_mirror: base must be square (n=p)");
  }
  const Index n = X0.n();
  CayleyMirror m(X0);
  m.forward = [X0, n](const StiefelPoint& X) -> Matrix {
    const Matrix I = Matrix::Identity(n, n);
    const Matrix M = X.matrix() * X0.matrix().transpose();
    Matrix St;
    try {
      St = solve_dense((M + I).transpose(), (M - I).transpose());
    } catch (const SingularMatrix&) {
      throw OutOfChart("cayley mirror: X X0^T + I is singular");
    }
    // The codomain is skew(n); the solve leaves a symmetric rounding
    // residue that the inverse Cayley factor would otherwise triple into
    // feasibility error at every re-centered step.
    return 0.5 * (St.transpose() - St);
  };
  m.diff_at_base = [X0](const Matrix& V) -> Matrix {
    // Equals (V X0^T)/2 on tangent vectors; the explicit skew form keeps the
    // dual point in skew(n) exactly, so the inverse Cayley factor stays
    // orthogonal instead of amplifying feasibility noise.
    const Matrix B = V * X0.matrix().transpose();
    return 0.25 * (B - B.transpose());
  };
  m.dual_retract = [](const Matrix& y, const Matrix& w) -> Matrix {
    return y + w;
  };
  m.inverse = [X0, n](const Matrix& S) -> StiefelPoint {
    const Matrix I = Matrix::Identity(n, n);
    return StiefelPoint(solve_dense(I - S, (I + S) * X0.matrix()));
  };
  m.check_tangent = [](const StiefelPoint& X, const Matrix& V) {
    const Matrix S = X.matrix().transpose() * V;
    const double res = (S + S.transpose()).norm();
    if (!(res <= 1e-8 * std::max(1.0, V.norm()))) {
      throw TangentMismatch(
          "cayley mirror: gradient not tangent, ||X^T V + V^T X|| = " +
          std::to_string(res));
    }
  };
  return m;
}

EuclideanMirror make_simplex_eg_mirror(Vector base_point) {
  const Potential entropy = neg_entropy_potential();
  if (!entropy.in_domain(base_point) ||
      std::abs(base_point.sum() - 1.0) > 1e-10) {
    throw DomainViolation("make_simplex_eg_mirror: base not on the simplex");
  }
  EuclideanMirror m = make_euclidean_mirror(entropy, std::move(base_point));
  m.inverse = [entropy](const Vector& y) -> Vector {
    Vector x = potential_conj_grad(entropy, y);
    const double total = x.sum();
    if (!(total > 0.0) || !std::isfinite(total)) {
      throw DomainViolation("simplex mirror: degenerate weights");
    }
    return x / total;
  };
  return m;
}

}  // namespace rmdopt
