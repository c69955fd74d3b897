#include "rmdopt/problems.hpp"

#include <memory>

namespace rmdopt {

namespace {

double top_p_eigensum(const Matrix& A, int p, Vector* spectrum) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(A, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) {
    throw SingularMatrix("eig oracle: eigendecomposition failed");
  }
  const Vector& vals = es.eigenvalues();  // ascending
  if (spectrum) *spectrum = vals;
  return vals.tail(p).sum();
}

}  // namespace

EigProblem eig_generate(int n, int p, SeededRng& rng) {
  if (n < p || p < 1) {
    throw DimensionMismatch("eig_generate: need n >= p >= 1");
  }
  const Matrix N = rand_gaussian(rng, n, n);
  Matrix M = N.transpose() * N;
  return eig_from_matrix(0.5 * (M + M.transpose()), p);
}

EigProblem eig_from_matrix(Matrix A, int p) {
  if (A.rows() != A.cols()) {
    throw DimensionMismatch("eig_from_matrix: A must be square");
  }
  if ((A - A.transpose()).norm() > 1e-10 * std::max(1.0, A.norm())) {
    throw DomainViolation("eig_from_matrix: A is not symmetric");
  }
  EigProblem pr;
  pr.p = p;
  pr.A = std::move(A);
  pr.optimum = -top_p_eigensum(pr.A, p, &pr.eigenvalues);
  return pr;
}

std::pair<double, Matrix> eig_value_grad(const EigProblem& pr,
                                         const StiefelPoint& X) {
  if (X.n() != pr.A.rows() || X.p() != pr.p) {
    throw DimensionMismatch("eig_value_grad: shape mismatch");
  }
  const Matrix AX = pr.A * X.matrix();
  const double f = -(X.matrix().array() * AX.array()).sum();
  return {f, -2.0 * AX};
}

ProcrustesProblem procrustes_generate(int n, int p, SeededRng& rng) {
  if (n < p || p < 1) {
    throw DimensionMismatch("procrustes_generate: need n >= p >= 1");
  }
  ProcrustesProblem pr;
  pr.A = rand_uniform01(rng, n, n);
  pr.X_star = qr_orthonormal(rand_gaussian(rng, n, p));
  pr.B = pr.A * pr.X_star;
  return pr;
}

std::pair<double, Matrix> procrustes_value_grad(const ProcrustesProblem& pr,
                                                const StiefelPoint& X) {
  if (X.n() != pr.A.rows() || X.p() != pr.B.cols()) {
    throw DimensionMismatch("procrustes_value_grad: shape mismatch");
  }
  const Matrix R = pr.A * X.matrix() - pr.B;
  return {R.squaredNorm(), 2.0 * pr.A.transpose() * R};
}

Problem make_solver_problem(const EigProblem& pr, Matrix X0) {
  auto data = std::make_shared<EigProblem>(pr);
  Problem p;
  p.n = data->A.rows();
  p.p = data->p;
  p.value = [data](const Matrix& X) {
    return -(X.array() * (data->A * X).array()).sum();
  };
  p.euclidean_gradient = [data](const Matrix& X) -> Matrix {
    return -2.0 * (data->A * X);
  };
  p.initial_point = std::move(X0);
  return p;
}

Problem make_solver_problem(const ProcrustesProblem& pr, Matrix X0) {
  auto data = std::make_shared<ProcrustesProblem>(pr);
  Problem p;
  p.n = data->A.rows();
  p.p = data->B.cols();
  p.value = [data](const Matrix& X) {
    return (data->A * X - data->B).squaredNorm();
  };
  p.euclidean_gradient = [data](const Matrix& X) -> Matrix {
    return 2.0 * data->A.transpose() * (data->A * X - data->B);
  };
  p.initial_point = std::move(X0);
  return p;
}

Matrix random_stiefel(int n, int p, SeededRng& rng) {
  return qr_orthonormal(rand_gaussian(rng, n, p));
}

}  // namespace rmdopt
