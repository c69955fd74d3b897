#pragma once

#include "rmdopt/solver.hpp"

namespace rmdopt {

/// Trace maximization max tr(X^T A X) over St(n,p), handled in minimization
/// form f(X) = -tr(X^T A X). A is symmetric positive semidefinite.
struct EigProblem {
  Matrix A;
  int p = 1;
  /// Minimization-form optimum -sum of the p largest eigenvalues, from a
  /// dense symmetric eigendecomposition at generation time.
  double optimum = 0.0;
  /// Full spectrum, ascending (as the eigensolver reports it).
  Vector eigenvalues;
};

/// A = N^T N with N an n x n standard normal matrix.
EigProblem eig_generate(int n, int p, SeededRng& rng);

/// Wraps a caller-supplied symmetric matrix (testing hook).
EigProblem eig_from_matrix(Matrix A, int p);

/// f(X) = -tr(X^T A X), Euclidean gradient -2 A X.
std::pair<double, Matrix> eig_value_grad(const EigProblem& pr,
                                         const StiefelPoint& X);

/// min ||A X - B||_F^2 over St(n,p) with a planted solution: B = A X*,
/// so the optimal value is 0.
struct ProcrustesProblem {
  Matrix A;
  Matrix B;
  Matrix X_star;
};

/// A has Unif(0,1) entries; X* is the Q factor of a Gaussian matrix.
ProcrustesProblem procrustes_generate(int n, int p, SeededRng& rng);

/// f(X) = ||A X - B||_F^2, Euclidean gradient 2 A^T (A X - B).
std::pair<double, Matrix> procrustes_value_grad(const ProcrustesProblem& pr,
                                                const StiefelPoint& X);

/// Solver-facing adapters. X0 becomes the initial point.
Problem make_solver_problem(const EigProblem& pr, Matrix X0);
Problem make_solver_problem(const ProcrustesProblem& pr, Matrix X0);

/// Random feasible starting frame: Q factor of an n x p Gaussian matrix.
Matrix random_stiefel(int n, int p, SeededRng& rng);

}  // namespace rmdopt
