#pragma once

#include <utility>

#include "rmdopt/manifolds.hpp"

namespace rmdopt {

/// Square skew-symmetric matrix (W + W^T = 0 within 1e-12, checked on
/// construction; products of the form G X^T - X G^T pass exactly).
class SkewMatrix {
 public:
  explicit SkewMatrix(Matrix W);

  static SkewMatrix zero(Index n) { return SkewMatrix(Matrix::Zero(n, n)); }

  const Matrix& matrix() const { return W_; }
  Index n() const { return W_.rows(); }

 private:
  Matrix W_;
};

/// Canonical-metric Riemannian gradient of f at X from its Euclidean
/// gradient G: returns (W, W X) with W = G X^T - X G^T.
std::pair<SkewMatrix, StiefelTangent> riemannian_gradient_stiefel(
    const StiefelPoint& X, const Matrix& G_euclid);

/// Cayley transform C(W) = (I - W)^{-1} (I + W); orthogonal for skew W.
StiefelPoint cayley(const SkewMatrix& W);

/// Inverse Cayley transform (X - I)(X + I)^{-1} for square orthogonal X.
/// Throws OutOfChart when X + I is singular.
SkewMatrix cayley_inverse(const StiefelPoint& Xo);

/// One curvilinear gradient step: solves
/// (I + eta/2 W) Y = (I - eta/2 W) X. Orthogonality is preserved because the
/// update matrix is a Cayley image of a skew matrix.
StiefelPoint cgd_update(const StiefelPoint& X, const SkewMatrix& W,
                        double eta);

/// Same step through the Sherman-Morrison-Woodbury identity: with
/// U = [G, X], V = [X, -G] (so W = U V^T) the update is
/// Y = X - eta U (I_{2p} + eta/2 V^T U)^{-1} V^T X, which only ever solves a
/// 2p x 2p system. Falls back to the dense path when 2p >= n.
StiefelPoint cgd_update_smw(const StiefelPoint& X, const Matrix& G_euclid,
                            double eta);

}  // namespace rmdopt
