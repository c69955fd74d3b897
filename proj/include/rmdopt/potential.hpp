#pragma once

#include <functional>
#include <string>

#include "rmdopt/dense.hpp"
#include "rmdopt/rng.hpp"

namespace rmdopt {

/// Strongly convex potential bundle: value, gradient, Hessian action and the
/// conjugate gradient map (the inverse of the gradient map).
struct Potential {
  std::string name;
  std::function<bool(const Vector&)> in_domain;
  std::function<double(const Vector&)> value;
  std::function<Vector(const Vector&)> gradient;
  std::function<Vector(const Vector&, const Vector&)> hessian_apply;
  std::function<Vector(const Vector&)> conj_gradient;
};

/// psi(x) = ||x||^2 / 2 on R^d; gradient and conjugate gradient are both the
/// identity.
Potential squared_norm_potential();

/// psi(x) = sum_i x_i log x_i on the open positive orthant;
/// grad_i = 1 + log x_i, conj_grad_i = exp(y_i - 1).
Potential neg_entropy_potential();

/// Gradient of the potential at x. Throws DomainViolation outside the domain.
Vector potential_grad(const Potential& p, const Vector& x);

/// Conjugate gradient map at y (maps dual points back to the primal domain).
Vector potential_conj_grad(const Potential& p, const Vector& y);

/// Bregman divergence D_psi(x, y) = psi(x) - psi(y) - <grad psi(y), x - y>.
double bregman_div(const Potential& p, const Vector& x, const Vector& y);

/// R^d equipped with the Hessian metric g(x) = Hess psi(x).
struct HessianMetricSpace {
  Potential potential;
  int dimension = 0;
};

/// Smallest Rayleigh quotient v^T Hess psi(x) v / ||v||^2 over the sampled
/// points and `dirs_per_point` random directions each. Positive output
/// witnesses positive definiteness of the metric.
double min_rayleigh_quotient(const HessianMetricSpace& space,
                             const std::vector<Vector>& points,
                             int dirs_per_point, SeededRng& rng);

}  // namespace rmdopt
