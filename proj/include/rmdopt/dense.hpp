#pragma once

#include <Eigen/Dense>

#include "rmdopt/errors.hpp"

namespace rmdopt {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// True iff every entry of M is finite (no NaN/Inf).
bool is_finite(const Matrix& M);

/// Solves AX = B for square A by partial-pivot LU.
///
/// Throws SingularMatrix when a pivot magnitude falls below
/// 1e-14 * max|A_ij|, DimensionMismatch on incompatible shapes.
Matrix solve_dense(const Matrix& A, const Matrix& B);

/// Q factor (n x p, orthonormal columns) of the QR decomposition of M.
/// The column span of Q equals the column span of M.
///
/// Throws RankDeficient when a diagonal entry of R falls below
/// 1e-12 * ||M||_F, DimensionMismatch when rows < cols.
Matrix qr_orthonormal(const Matrix& M);

}  // namespace rmdopt
