#include "rmdopt/dense.hpp"

#include "doctest.h"
#include "rmdopt/rng.hpp"

using namespace rmdopt;

TEST_CASE("solve_dense identity returns the right-hand side") {
  SeededRng rng(1);
  const Matrix B = rand_gaussian(rng, 3, 2);
  const Matrix X = solve_dense(Matrix::Identity(3, 3), B);
  CHECK((X - B).norm() == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("solve_dense diagonal system") {
  Matrix A(2, 2);
  A << 2, 0, 0, 4;
  Matrix B(2, 1);
  B << 2, 8;
  const Matrix X = solve_dense(A, B);
  CHECK(X(0, 0) == doctest::Approx(1.0));
  CHECK(X(1, 0) == doctest::Approx(2.0));
}

TEST_CASE("solve_dense matches a hand-computed 2x2 inverse") {
  // A = I + W/2 with W = [[0,1],[-1,0]]: det = 1.25,
  // A^{-1} = [[0.8, -0.4], [0.4, 0.8]].
  Matrix A(2, 2);
  A << 1.0, 0.5, -0.5, 1.0;
  const Matrix X = solve_dense(A, Matrix::Identity(2, 2));
  Matrix expected(2, 2);
  expected << 0.8, -0.4, 0.4, 0.8;
  CHECK((X - expected).norm() < 1e-14);
}

TEST_CASE("solve_dense error paths") {
  CHECK_THROWS_AS(solve_dense(Matrix::Zero(2, 3), Matrix::Zero(2, 1)),
                  DimensionMismatch);
  CHECK_THROWS_AS(solve_dense(Matrix::Identity(2, 2), Matrix::Zero(3, 1)),
                  DimensionMismatch);
  CHECK_THROWS_AS(solve_dense(Matrix::Zero(2, 2), Matrix::Zero(2, 1)),
                  SingularMatrix);

  Matrix singular(2, 2);
  singular << 1, 2, 2, 4;
  CHECK_THROWS_AS(solve_dense(singular, Matrix::Identity(2, 2)),
                  SingularMatrix);
}

TEST_CASE("solve_dense residual and recovery on random systems") {
  SeededRng rng(42);
  for (int n : {5, 50, 200}) {
    const Matrix A =
        rand_gaussian(rng, n, n) + 2.0 * std::sqrt(n) * Matrix::Identity(n, n);
    const Matrix X_true = rand_gaussian(rng, n, 3);
    const Matrix B = A * X_true;
    const Matrix X = solve_dense(A, B);
    CHECK((A * X - B).norm() <= 1e-10 * (1.0 + B.norm()));
    CHECK((X - X_true).norm() <= 1e-9 * X_true.norm());
  }
}

TEST_CASE("qr_orthonormal identity and scaling invariance") {
  const Matrix Q = qr_orthonormal(Matrix::Identity(3, 3));
  CHECK((Q.cwiseAbs() - Matrix::Identity(3, 3)).norm() < 1e-12);

  Matrix M = Matrix::Zero(3, 1);
  M(0, 0) = 2.0;
  const Matrix Q2 = qr_orthonormal(M);
  CHECK(std::abs(std::abs(Q2(0, 0)) - 1.0) < 1e-14);
  CHECK(std::abs(Q2(1, 0)) < 1e-14);
  CHECK(std::abs(Q2(2, 0)) < 1e-14);
}

TEST_CASE("qr_orthonormal produces orthonormal columns spanning the input") {
  SeededRng rng(3);
  const Matrix M = rand_gaussian(rng, 20, 5);
  const Matrix Q = qr_orthonormal(M);
  CHECK((Q.transpose() * Q - Matrix::Identity(5, 5)).norm() <= 1e-12);
  // Span check: M projects onto col(Q) without residual.
  const Matrix residual = M - Q * (Q.transpose() * M);
  CHECK(residual.norm() < 1e-10 * M.norm());
}

TEST_CASE("qr_orthonormal idempotent up to column signs") {
  SeededRng rng(4);
  const Matrix Q = qr_orthonormal(rand_gaussian(rng, 12, 4));
  const Matrix Q2 = qr_orthonormal(Q);
  CHECK(((Q.transpose() * Q2).cwiseAbs() - Matrix::Identity(4, 4)).norm() <=
        1e-12);
}

TEST_CASE("qr_orthonormal rejects rank-deficient input") {
  Matrix M(3, 2);
  M << 1, 2, 1, 2, 1, 2;  // second column is a multiple of the first
  CHECK_THROWS_AS(qr_orthonormal(M), RankDeficient);
  CHECK_THROWS_AS(qr_orthonormal(Matrix::Zero(2, 3)), DimensionMismatch);
}

TEST_CASE("is_finite flags NaN and Inf") {
  Matrix M = Matrix::Zero(2, 2);
  CHECK(is_finite(M));
  M(0, 1) = std::numeric_limits<double>::quiet_NaN();
  CHECK(!is_finite(M));
  M(0, 1) = std::numeric_limits<double>::infinity();
  CHECK(!is_finite(M));
}
