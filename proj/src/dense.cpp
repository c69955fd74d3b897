#include "rmdopt/dense.hpp"

namespace rmdopt {

namespace {
constexpr double kPivotRelTol = 1e-14;
constexpr double kRankRelTol = 1e-12;
}  // namespace

bool is_finite(const Matrix& M) { return M.allFinite(); }

Matrix solve_dense(const Matrix& A, const Matrix& B) {
  if (A.rows() != A.cols()) {
    throw DimensionMismatch("solve_dense: A must be square, got " +
                            std::to_string(A.rows()) + "x" +
                            std::to_string(A.cols()));
  }
  if (A.rows() != B.rows()) {
    throw DimensionMismatch("solve_dense: A is " + std::to_string(A.rows()) +
                            "x" + std::to_string(A.cols()) + " but B has " +
                            std::to_string(B.rows()) + " rows");
  }
  if (A.rows() == 0) {
    throw DimensionMismatch("solve_dense: empty system");
  }

  Eigen::PartialPivLU<Matrix> lu(A);
  const double a_max = A.cwiseAbs().maxCoeff();
  const double min_pivot = lu.matrixLU().diagonal().cwiseAbs().minCoeff();
  if (!(min_pivot > kPivotRelTol * a_max)) {
    throw SingularMatrix("solve_dense: pivot " + std::to_string(min_pivot) +
                         " below threshold " +
                         std::to_string(kPivotRelTol * a_max));
  }

  Matrix X = lu.solve(B);
  if (!is_finite(X)) {
    throw SingularMatrix("solve_dense: non-finite solution");
  }
  return X;
}

Matrix qr_orthonormal(const Matrix& M) {
  if (M.cols() < 1 || M.rows() < M.cols()) {
    throw DimensionMismatch("qr_orthonormal: need n >= p >= 1, got " +
                            std::to_string(M.rows()) + "x" +
                            std::to_string(M.cols()));
  }

  Eigen::HouseholderQR<Matrix> qr(M);
  const double r_min =
      qr.matrixQR().diagonal().head(M.cols()).cwiseAbs().minCoeff();
  if (!(r_min > kRankRelTol * M.norm())) {
    throw RankDeficient("qr_orthonormal: R diagonal " + std::to_string(r_min) +
                        " signals rank-deficient input");
  }

  // Thin Q via application of the Householder sequence to I_{n x p}.
  Matrix Q = qr.householderQ() * Matrix::Identity(M.rows(), M.cols());
  return Q;
}

}  // namespace rmdopt
