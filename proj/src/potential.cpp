#include "rmdopt/potential.hpp"

#include <cmath>
#include <limits>

namespace rmdopt {

namespace {
void require_domain(const Potential& p, const Vector& x, const char* op) {
  if (!p.in_domain(x)) {
    throw DomainViolation(std::string(op) + ": point outside domain of " +
                          p.name);
  }
}
}  // namespace

Potential squared_norm_potential() {
  Potential p;
  p.name = "squared_norm";
  p.in_domain = [](const Vector& x) { return x.allFinite(); };
  p.value = [](const Vector& x) { return 0.5 * x.squaredNorm(); };
  p.gradient = [](const Vector& x) { return x; };
  p.hessian_apply = [](const Vector&, const Vector& v) { return v; };
  p.conj_gradient = [](const Vector& y) { return y; };
  return p;
}

Potential neg_entropy_potential() {
  Potential p;
  p.name = "neg_entropy";
  p.in_domain = [](const Vector& x) {
    return x.allFinite() && (x.array() > 0.0).all();
  };
  p.value = [](const Vector& x) {
    return (x.array() * x.array().log()).sum();
  };
  p.gradient = [](const Vector& x) {
    return Vector(1.0 + x.array().log());
  };
  p.hessian_apply = [](const Vector& x, const Vector& v) {
    return Vector(v.array() / x.array());
  };
  p.conj_gradient = [](const Vector& y) {
    return Vector((y.array() - 1.0).exp());
  };
  return p;
}

Vector potential_grad(const Potential& p, const Vector& x) {
  require_domain(p, x, "potential_grad");
  return p.gradient(x);
}

Vector potential_conj_grad(const Potential& p, const Vector& y) {
  Vector x = p.conj_gradient(y);
  if (!x.allFinite()) {
    throw DomainViolation("potential_conj_grad: non-finite primal point for " +
                          p.name);
  }
  return x;
}

double bregman_div(const Potential& p, const Vector& x, const Vector& y) {
  if (x.size() != y.size()) {
    throw DimensionMismatch("bregman_div: size mismatch");
  }
  require_domain(p, x, "bregman_div");
  require_domain(p, y, "bregman_div");
  return p.value(x) - p.value(y) - p.gradient(y).dot(x - y);
}

double min_rayleigh_quotient(const HessianMetricSpace& space,
                             const std::vector<Vector>& points,
                             int dirs_per_point, SeededRng& rng) {
  double min_q = std::numeric_limits<double>::infinity();
  for (const Vector& x : points) {
    require_domain(space.potential, x, "min_rayleigh_quotient");
    for (int k = 0; k < dirs_per_point; ++k) {
      Vector v = rand_gaussian(rng, space.dimension, 1).col(0);
      const double nv2 = v.squaredNorm();
      if (nv2 == 0.0) continue;
      const double q = v.dot(space.potential.hessian_apply(x, v)) / nv2;
      min_q = std::min(min_q, q);
    }
  }
  return min_q;
}

}  // namespace rmdopt
