#pragma once

#include <functional>
#include <limits>

#include "rmdopt/manifolds.hpp"
#include "rmdopt/potential.hpp"
#include "rmdopt/rng.hpp"

namespace rmdopt {

/// Local diffeomorphism bundle realizing one mirror-descent instantiation:
/// a forward chart map into the dual space, its differential at the base
/// point, a retraction in the dual space, and the inverse chart map.
///
/// The composite u -> inverse(dual_retract(forward(base), diff_at_base(u)))
/// is a retraction: it fixes the base point and its differential at zero is
/// the identity.
template <class Point, class Tangent, class Dual>
struct MirrorMap {
  explicit MirrorMap(Point base) : base_point(std::move(base)) {}

  std::function<Dual(const Point&)> forward;
  std::function<Dual(const Tangent&)> diff_at_base;
  std::function<Dual(const Dual&, const Dual&)> dual_retract;
  std::function<Point(const Dual&)> inverse;
  Point base_point;
  double validity_radius = std::numeric_limits<double>::infinity();

  /// Norm used for the validity-radius check; defaults to the Frobenius/2
  /// norm of the tangent representation.
  std::function<double(const Tangent&)> tangent_norm;
  /// Optional tangency check; throws TangentMismatch.
  std::function<void(const Point&, const Tangent&)> check_tangent;
};

using EuclideanMirror = MirrorMap<Vector, Vector, Vector>;
using SphereExpMirror = MirrorMap<SpherePoint, Vector, Vector>;
using CayleyMirror = MirrorMap<StiefelPoint, Matrix, Matrix>;

/// One mirror-descent step:
///   y = dual_retract(forward(x), -eta * diff_at_base(grad))
///   x_next = inverse(y).
/// `grad` is the Riemannian gradient of the objective at x (for the
/// Euclidean mirror, with respect to the Hessian metric of its potential).
/// Throws OutOfChart when ||eta * grad|| reaches the validity radius.
template <class Point, class Tangent, class Dual>
Point rmd_step(const Point& x, const Tangent& grad, double eta,
               const MirrorMap<Point, Tangent, Dual>& m) {
  if (!(eta > 0.0)) {
    throw ConfigError("rmd_step: step size must be positive");
  }
  if (m.check_tangent) {
    m.check_tangent(x, grad);
  }
  const double len =
      m.tangent_norm ? m.tangent_norm(grad) : static_cast<double>(grad.norm());
  if (!(eta * len < m.validity_radius)) {
    throw OutOfChart("rmd_step: step length " + std::to_string(eta * len) +
                     " reaches the chart radius " +
                     std::to_string(m.validity_radius));
  }
  const Dual y0 = m.forward(x);
  const Dual w = m.diff_at_base(grad);
  const Dual y1 = m.dual_retract(y0, Dual(-eta * w));
  return m.inverse(y1);
}

/// Deterministic Riemannian gradient plus an unbiased stochastic estimate.
template <class Point, class Tangent>
struct GradientOracle {
  std::function<Tangent(const Point&)> deterministic;
  std::function<Tangent(const Point&, SeededRng&)> stochastic;
  /// Optional variance diagnostic (sup of E||est - grad||^2); NaN if unknown.
  double variance_bound = std::numeric_limits<double>::quiet_NaN();
};

/// Stochastic mirror-descent step: one oracle draw, then rmd_step.
template <class Point, class Tangent, class Dual>
Point srmd_step(const Point& x, const GradientOracle<Point, Tangent>& oracle,
                double eta, const MirrorMap<Point, Tangent, Dual>& m,
                SeededRng& rng) {
  return rmd_step(x, oracle.stochastic(x, rng), eta, m);
}

/// Classical mirror descent: forward = grad psi, dual step y + w,
/// inverse = grad psi*. The differential at the base is the Hessian action
/// of the potential, so the composite chart is first-order exact.
EuclideanMirror make_euclidean_mirror(const Potential& p, Vector base_point);

inline constexpr double kSphereExpDefaultRadius = 3.141592653589793 - 1e-6;

/// Geodesic chart on the unit sphere: forward = Exp_x^{-1}, dual step is
/// vector addition in the tangent space, inverse = Exp_x. A step of length
/// eta*||grad|| >= radius leaves the chart. Default radius pi - 1e-6.
SphereExpMirror make_exp_mirror(const SpherePoint& x_t,
                                double radius = kSphereExpDefaultRadius);

/// Cayley chart on the square Stiefel manifold St(n,n) centered at X0:
/// forward(X) = (X X0^T - I)(X X0^T + I)^{-1} into skew(n), Euclidean dual
/// retraction, inverse(S) = (I - S)^{-1}(I + S) X0. A step with the
/// Riemannian gradient W X0 lands on (I + eta/2 W)^{-1}(I - eta/2 W) X0.
CayleyMirror make_cayley_mirror(const StiefelPoint& X0);

/// Exponentiated-gradient variant normalized onto the probability simplex
/// (multiplicative weights). The chart is bijective on the simplex interior;
/// used as a closed-form cross-check instance.
EuclideanMirror make_simplex_eg_mirror(Vector base_point);

}  // namespace rmdopt
