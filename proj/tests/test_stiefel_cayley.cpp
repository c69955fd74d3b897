#include "rmdopt/stiefel_cayley.hpp"

#include <cmath>

#include "doctest.h"
#include "rmdopt/problems.hpp"

using namespace rmdopt;

namespace {

Matrix rotation90() {
  Matrix W(2, 2);
  W << 0, 1, -1, 0;
  return W;
}

SkewMatrix random_skew(int n, double scale, SeededRng& rng) {
  const Matrix M = rand_gaussian(rng, n, n);
  return SkewMatrix(scale * (M - M.transpose()));
}

}  // namespace

TEST_CASE("SkewMatrix rejects symmetric parts") {
  CHECK_NOTHROW(SkewMatrix(rotation90()));
  Matrix bad = rotation90();
  bad(0, 0) = 1e-6;
  CHECK_THROWS_AS(SkewMatrix{bad}, DomainViolation);
  CHECK_THROWS_AS(SkewMatrix(Matrix::Zero(2, 3)), DimensionMismatch);
}

TEST_CASE("riemannian_gradient_stiefel hand-computed 2x1 case") {
  Matrix e1(2, 1);
  e1 << 1, 0;
  Matrix G(2, 1);
  G << 0, 1;
  const auto [W, grad] = riemannian_gradient_stiefel(StiefelPoint(e1), G);
  Matrix W_expected(2, 2);
  W_expected << 0, -1, 1, 0;
  CHECK((W.matrix() - W_expected).norm() == 0.0);
  CHECK(grad.matrix()(0, 0) == 0.0);
  CHECK(grad.matrix()(1, 0) == 1.0);
}

TEST_CASE("riemannian_gradient_stiefel vanishes when G = X") {
  SeededRng rng(21);
  const StiefelPoint X(random_stiefel(6, 3, rng));
  const auto [W, grad] = riemannian_gradient_stiefel(X, X.matrix());
  CHECK(W.matrix().norm() <= 1e-14);
  CHECK(grad.matrix().norm() <= 1e-14);
}

TEST_CASE("riemannian_gradient_stiefel output is skew exactly and tangent") {
  SeededRng rng(22);
  for (int trial = 0; trial < 25; ++trial) {
    const StiefelPoint X(random_stiefel(8, 3, rng));
    const Matrix G = rand_gaussian(rng, 8, 3);
    const auto [W, grad] = riemannian_gradient_stiefel(X, G);
    CHECK((W.matrix() + W.matrix().transpose()).norm() == 0.0);
    const Matrix S = X.matrix().transpose() * grad.matrix();
    CHECK((S + S.transpose()).norm() <= 1e-12 * std::max(1.0, G.norm()));
  }
}

TEST_CASE("cayley of zero is the identity") {
  const StiefelPoint C = cayley(SkewMatrix::zero(3));
  CHECK((C.matrix() - Matrix::Identity(3, 3)).norm() == 0.0);
}

TEST_CASE("cayley hand-computed 2x2 rotation") {
  // (I - W)^{-1}(I + W) for W = [[0,1],[-1,0]] equals W itself.
  const StiefelPoint C = cayley(SkewMatrix(rotation90()));
  CHECK((C.matrix() - rotation90()).norm() <= 1e-15);
}

TEST_CASE("cayley images are orthogonal") {
  SeededRng rng(23);
  for (int trial = 0; trial < 10; ++trial) {
    const StiefelPoint C = cayley(random_skew(10, 0.5, rng));
    CHECK((C.matrix().transpose() * C.matrix() - Matrix::Identity(10, 10))
              .norm() <= 1e-12);
  }
}

TEST_CASE("cayley_inverse of the identity is zero") {
  const SkewMatrix S = cayley_inverse(StiefelPoint(Matrix::Identity(4, 4)));
  CHECK(S.matrix().norm() == 0.0);
}

TEST_CASE("cayley_inverse flags the chart boundary at X = -I") {
  CHECK_THROWS_AS(cayley_inverse(StiefelPoint(-Matrix::Identity(2, 2))),
                  OutOfChart);
}

TEST_CASE("cayley round trips on small skew matrices") {
  SeededRng rng(24);
  for (int trial = 0; trial < 20; ++trial) {
    const SkewMatrix S = random_skew(6, 0.05, rng);
    const StiefelPoint X = cayley(S);
    const SkewMatrix back = cayley_inverse(X);
    CHECK((back.matrix() - S.matrix()).norm() <= 1e-10);
    CHECK((S.matrix() + S.matrix().transpose()).norm() <= 1e-12);
    // Forward direction as well: cayley(cayley_inverse(X)) = X.
    const StiefelPoint X2 = cayley(back);
    CHECK((X2.matrix() - X.matrix()).norm() <= 1e-10);
  }
}

TEST_CASE("cgd_update with W = 0 is a no-op") {
  SeededRng rng(25);
  const StiefelPoint X(random_stiefel(5, 2, rng));
  const StiefelPoint Y = cgd_update(X, SkewMatrix::zero(5), 0.7);
  CHECK((Y.matrix() - X.matrix()).norm() == 0.0);
}

TEST_CASE("cgd_update hand-computed 2x1 case") {
  Matrix e1(2, 1);
  e1 << 1, 0;
  Matrix W(2, 2);
  W << 0, -1, 1, 0;
  // eta = 2: (I + W)^{-1}(I - W) e1 = (0, -1)^T.
  const StiefelPoint Y = cgd_update(StiefelPoint(e1), SkewMatrix(W), 2.0);
  CHECK(Y.matrix()(0, 0) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(Y.matrix()(1, 0) == doctest::Approx(-1.0).epsilon(1e-14));
}

TEST_CASE("cgd_update descends on the eigenvalue problem for small steps") {
  SeededRng rng(26);
  const EigProblem pr = eig_generate(20, 3, rng);
  const StiefelPoint X(random_stiefel(20, 3, rng));
  const auto [f0, G] = eig_value_grad(pr, X);
  const auto [W, grad] = riemannian_gradient_stiefel(X, G);
  const StiefelPoint Y = cgd_update(X, W, 1e-3);
  const auto [f1, G1] = eig_value_grad(pr, Y);
  CHECK(f1 < f0);
}

TEST_CASE("cgd_update keeps orthogonality over long trajectories") {
  SeededRng rng(27);
  const EigProblem pr = eig_generate(30, 4, rng);
  StiefelPoint X(random_stiefel(30, 4, rng));
  double worst = 0.0;
  for (int t = 0; t < 2000; ++t) {
    const auto [f, G] = eig_value_grad(pr, X);
    X = cgd_update(X, riemannian_gradient_stiefel(X, G).first, 1e-3);
    worst = std::max(worst, X.feasibility_residual());
  }
  CHECK(worst <= 1e-10);
}

TEST_CASE("cgd_update_smw no-op when G = X") {
  SeededRng rng(28);
  const StiefelPoint X(random_stiefel(50, 3, rng));
  const StiefelPoint Y = cgd_update_smw(X, X.matrix(), 0.5);
  CHECK((Y.matrix() - X.matrix()).norm() <= 1e-12);
}

TEST_CASE("cgd_update_smw agrees with the dense path") {
  SeededRng rng(29);
  for (int trial = 0; trial < 10; ++trial) {
    const StiefelPoint X(random_stiefel(50, 3, rng));
    const Matrix G = rand_gaussian(rng, 50, 3);
    const StiefelPoint dense =
        cgd_update(X, riemannian_gradient_stiefel(X, G).first, 1e-2);
    const StiefelPoint smw = cgd_update_smw(X, G, 1e-2);
    CHECK((dense.matrix() - smw.matrix()).norm() <= 1e-10);
    CHECK(smw.feasibility_residual() <= 1e-10);
  }
}

TEST_CASE("cgd_update_smw path equivalence across shapes") {
  SeededRng rng(30);
  for (int n : {20, 50, 100}) {
    for (int p : {1, 3, 5}) {
      const StiefelPoint X(random_stiefel(n, p, rng));
      const Matrix G = rand_gaussian(rng, n, p);
      const double eta = 5e-2;
      const StiefelPoint dense =
          cgd_update(X, riemannian_gradient_stiefel(X, G).first, eta);
      const StiefelPoint smw = cgd_update_smw(X, G, eta);
      CHECK((dense.matrix() - smw.matrix()).norm() <= 1e-10);
    }
  }
}

TEST_CASE("cgd_update_smw falls back to the dense path when 2p >= n") {
  SeededRng rng(31);
  const StiefelPoint X(random_stiefel(4, 2, rng));
  const Matrix G = rand_gaussian(rng, 4, 2);
  const StiefelPoint dense =
      cgd_update(X, riemannian_gradient_stiefel(X, G).first, 1e-2);
  const StiefelPoint smw = cgd_update_smw(X, G, 1e-2);
  CHECK((dense.matrix() - smw.matrix()).norm() == 0.0);
}

TEST_CASE("Cayley factors commute: (I+aW)^{-1}(I-aW) = (I-aW)(I+aW)^{-1}") {
  SeededRng rng(32);
  const SkewMatrix W = random_skew(8, 0.3, rng);
  const double a = 0.25;
  const Matrix I = Matrix::Identity(8, 8);
  const Matrix left = solve_dense(I + a * W.matrix(), I - a * W.matrix());
  // (I-aW)(I+aW)^{-1} via the transposed system.
  const Matrix right =
      solve_dense((I + a * W.matrix()).transpose(),
                  (I - a * W.matrix()).transpose())
          .transpose();
  CHECK((left - right).norm() <= 1e-12);
}
