#include "rmdopt/manifolds.hpp"

#include <cmath>

#include "doctest.h"
#include "rmdopt/problems.hpp"
#include "rmdopt/rng.hpp"

using namespace rmdopt;

namespace {
SpherePoint unit(std::initializer_list<double> coords) {
  Vector x(static_cast<Index>(coords.size()));
  Index i = 0;
  for (double c : coords) x(i++) = c;
  return SpherePoint(x / x.norm());
}
}  // namespace

TEST_CASE("StiefelPoint accepts feasible frames and rejects violations") {
  SeededRng rng(1);
  const Matrix Q = random_stiefel(6, 2, rng);
  CHECK_NOTHROW(StiefelPoint{Q});
  CHECK(StiefelPoint(Q).feasibility_residual() <= 1e-12);

  Matrix bad = Q;
  bad(0, 0) += 1e-4;
  CHECK_THROWS_AS(StiefelPoint{bad}, InfeasiblePoint);

  // Near-feasible fuzz at the tolerance boundary.
  for (int trial = 0; trial < 50; ++trial) {
    Matrix fuzzed = random_stiefel(8, 3, rng);
    fuzzed(0, 0) += 1e-3 * rng.next_uniform01();
    const double res =
        (fuzzed.transpose() * fuzzed - Matrix::Identity(3, 3)).norm();
    if (res > kStiefelFeasTol) {
      CHECK_THROWS_AS(StiefelPoint{fuzzed}, InfeasiblePoint);
    } else {
      CHECK_NOTHROW(StiefelPoint{fuzzed});
    }
  }
}

TEST_CASE("StiefelTangent enforces the tangency invariant") {
  SeededRng rng(2);
  const StiefelPoint X(random_stiefel(6, 2, rng));
  CHECK_THROWS_AS(StiefelTangent(X, X.matrix()), TangentMismatch);
  CHECK_NOTHROW(stiefel_project_tangent(X, rand_gaussian(rng, 6, 2)));
}

TEST_CASE("stiefel_canonical_inner on a square orthogonal base") {
  SeededRng rng(3);
  const StiefelPoint X(random_stiefel(4, 4, rng));
  const StiefelTangent A =
      stiefel_project_tangent(X, rand_gaussian(rng, 4, 4));
  // X X^T = I collapses the projector to I/2.
  CHECK(stiefel_canonical_inner(X, A, A) ==
        doctest::Approx(0.5 * A.matrix().squaredNorm()).epsilon(1e-12));

  const StiefelTangent zero(X, Matrix::Zero(4, 4));
  CHECK(stiefel_canonical_inner(X, zero, zero) == 0.0);
}

TEST_CASE("stiefel_canonical_inner hand-computed 2x1 case") {
  Matrix e1(2, 1);
  e1 << 1, 0;
  Matrix e2(2, 1);
  e2 << 0, 1;
  const StiefelPoint X(e1);
  const StiefelTangent A(X, e2);
  CHECK(stiefel_canonical_inner(X, A, A) == doctest::Approx(1.0));
}

TEST_CASE("stiefel_canonical_inner rejects foreign bases") {
  SeededRng rng(4);
  const StiefelPoint X(random_stiefel(5, 2, rng));
  const StiefelPoint Y(random_stiefel(5, 2, rng));
  const StiefelTangent A =
      stiefel_project_tangent(X, rand_gaussian(rng, 5, 2));
  const StiefelTangent B =
      stiefel_project_tangent(Y, rand_gaussian(rng, 5, 2));
  CHECK_THROWS_AS(stiefel_canonical_inner(X, A, B), BaseMismatch);
}

TEST_CASE("stiefel_canonical_inner is symmetric and bilinear") {
  SeededRng rng(5);
  const StiefelPoint X(random_stiefel(7, 3, rng));
  const StiefelTangent A =
      stiefel_project_tangent(X, rand_gaussian(rng, 7, 3));
  const StiefelTangent B =
      stiefel_project_tangent(X, rand_gaussian(rng, 7, 3));
  const double ab = stiefel_canonical_inner(X, A, B);
  const double ba = stiefel_canonical_inner(X, B, A);
  CHECK(ab == doctest::Approx(ba).epsilon(1e-12));

  const StiefelTangent A2(X, 2.0 * A.matrix());
  CHECK(stiefel_canonical_inner(X, A2, B) ==
        doctest::Approx(2.0 * ab).epsilon(1e-12));
}

TEST_CASE("stiefel_project_tangent properties") {
  SeededRng rng(6);
  const StiefelPoint X(random_stiefel(6, 2, rng));

  SUBCASE("idempotent on tangent input") {
    const Matrix Z =
        stiefel_project_tangent(X, rand_gaussian(rng, 6, 2)).matrix();
    const Matrix Z2 = stiefel_project_tangent(X, Z).matrix();
    CHECK((Z - Z2).norm() <= 1e-12 * std::max(1.0, Z.norm()));
  }

  SUBCASE("projection of X itself vanishes") {
    CHECK(stiefel_project_tangent(X, X.matrix()).matrix().norm() <= 1e-12);
  }

  SUBCASE("output satisfies tangency tightly") {
    const StiefelPoint Y(random_stiefel(6, 2, rng));
    const Matrix Z =
        stiefel_project_tangent(Y, rand_gaussian(rng, 6, 2)).matrix();
    const Matrix S = Y.matrix().transpose() * Z;
    CHECK((S + S.transpose()).norm() <= 1e-12);
  }

  SUBCASE("shape mismatch") {
    CHECK_THROWS_AS(stiefel_project_tangent(X, Matrix::Zero(3, 3)),
                    DimensionMismatch);
  }
}

TEST_CASE("SpherePoint and SphereTangent invariants") {
  CHECK_THROWS_AS(SpherePoint(Vector::Zero(3)), InfeasiblePoint);
  const SpherePoint x = unit({1, 0, 0});
  Vector v(3);
  v << 0.5, 1.0, 0.0;
  CHECK_THROWS_AS(SphereTangent(x, v), TangentMismatch);
  v << 0.0, 1.0, 0.0;
  CHECK_NOTHROW(SphereTangent(x, v));
}

TEST_CASE("sphere_exp quarter great circle") {
  const SpherePoint x = unit({1, 0});
  Vector v(2);
  v << 0.0, M_PI / 2.0;
  const SpherePoint y = sphere_exp(x, SphereTangent(x, v));
  CHECK(y.vector()(0) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(y.vector()(1) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("sphere_exp fixes the base at v = 0") {
  const SpherePoint x = unit({0.6, 0.8});
  const SpherePoint y = sphere_exp(x, SphereTangent(x, Vector::Zero(2)));
  CHECK((y.vector() - x.vector()).norm() == 0.0);
}

TEST_CASE("sphere_exp arc length equals the tangent norm") {
  const SpherePoint x = unit({1, 0, 0});
  Vector v(3);
  v << 0.0, 0.3, 0.4;
  const SpherePoint y = sphere_exp(x, SphereTangent(x, v));
  CHECK(std::abs(y.vector().norm() - 1.0) <= 1e-12);
  const double dist = std::acos(x.vector().dot(y.vector()));
  CHECK(dist == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("sphere_log inverts sphere_exp inside the injectivity radius") {
  SeededRng rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    Vector raw = rand_gaussian(rng, 4, 1).col(0);
    const SpherePoint x(raw / raw.norm());
    Vector u = rand_gaussian(rng, 4, 1).col(0);
    u -= x.vector() * x.vector().dot(u);
    u *= (0.1 + 2.9 * rng.next_uniform01()) / u.norm();  // lengths in (0.1, 3)
    const SpherePoint y = sphere_exp(x, SphereTangent(x, u));
    const Vector back = sphere_log(x, y).vector();
    CHECK((back - u).norm() <= 1e-10 * std::max(1.0, u.norm()));
  }
}

TEST_CASE("sphere_retract normalizes and keeps the base at v = 0") {
  const SpherePoint x = unit({1, 0});
  Vector v(2);
  v << 0.0, 1.0;
  const SpherePoint y = sphere_retract(x, SphereTangent(x, v));
  CHECK(y.vector()(0) == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(y.vector()(1) == doctest::Approx(1.0 / std::sqrt(2.0)));

  const SpherePoint z = sphere_retract(x, SphereTangent(x, Vector::Zero(2)));
  CHECK((z.vector() - x.vector()).norm() == 0.0);
}

TEST_CASE("sphere retraction is first-order: DR_x(0) = Id") {
  const SpherePoint x = unit({0, 1, 0});
  Vector u(3);
  u << 0.7, 0.0, -0.2;
  u -= x.vector() * x.vector().dot(u);
  const double h = 1e-6;
  const Vector plus = sphere_retract(x, SphereTangent(x, h * u)).vector();
  const Vector minus = sphere_retract(x, SphereTangent(x, -h * u)).vector();
  const Vector deriv = (plus - minus) / (2.0 * h);
  CHECK((deriv - u).norm() <= 1e-5 * u.norm());
}

TEST_CASE("sphere retraction-vs-exponential gap decays quadratically") {
  const SpherePoint x = unit({1, 0, 0});
  Vector u(3);
  u << 0.0, 0.8, 0.6;
  std::vector<double> lt, lg;
  for (double t : {1e-1, 1e-2, 1e-3}) {
    const SphereTangent step(x, t * u);
    const Vector via_retract = sphere_retract(x, step).vector();
    const Vector via_exp = sphere_exp(x, step).vector();
    const double gap = (via_retract - via_exp).norm();
    CHECK(gap > 0.0);
    lt.push_back(std::log(t));
    lg.push_back(std::log(gap));
  }
  const double slope = (lg.front() - lg.back()) / (lt.front() - lt.back());
  CHECK(slope >= 1.9);
}
