#pragma once

#include <vector>

#include "rmdopt/rng.hpp"
#include "rmdopt/stiefel_cayley.hpp"

namespace rmdopt {

/// Disjoint near-even cover of [0, n): block sizes differ by at most one.
struct BlockPartition {
  int n = 0;
  std::vector<std::vector<int>> blocks;

  int num_blocks() const { return static_cast<int>(blocks.size()); }
};

/// Uniformly random near-even partition of [0, n) into K blocks: a random
/// permutation cut into consecutive chunks. Throws InvalidK unless
/// 1 <= K <= n.
BlockPartition sample_partition(int n, int K, SeededRng& rng);

/// All partitions of [0, n) into K unordered blocks of equal size n/K.
/// Requires K | n. Intended for exhaustive unbiasedness checks at small n.
std::vector<BlockPartition> enumerate_equal_partitions(int n, int K);

/// Per-block skew factors W_k = G_k X_k^T - X_k G_k^T over the rows of each
/// block (the I_k x I_k submatrices of the full W = G X^T - X G^T).
struct BlockSkewSet {
  BlockPartition partition;
  std::vector<SkewMatrix> blocks;
};

BlockSkewSet block_skew_set(const StiefelPoint& X, const Matrix& G_euclid,
                            const BlockPartition& part);

/// Reciprocal of the same-block probability
/// p = sum_k s_k (s_k - 1) / (n (n - 1)); equals (n-1)/(n/K-1) for equal
/// blocks. Scaling the block estimator by this value makes it unbiased for
/// the full W. Throws DegenerateScale when every block is a singleton.
double unbiased_scale(const BlockPartition& part);

/// Block-diagonal embedding of the per-block skew factors times
/// unbiased_scale; its expectation over random partitions is the full W.
SkewMatrix estimate_full_skew(const BlockSkewSet& bs);

/// One stochastic curvilinear step: every block of rows gets its own Cayley
/// update (I + eta/2 W_k) Y_k = (I - eta/2 W_k) X_k. The implicit n x n
/// update matrix is block-orthogonal, so X^T X is preserved for any
/// partition. With scale_unbiased the W_k are premultiplied by
/// unbiased_scale(part). Blocks touch disjoint rows; with num_threads > 1
/// they are solved concurrently with results identical to sequential
/// execution.
StiefelPoint scgd_step(const StiefelPoint& X, const Matrix& G_euclid,
                       double eta, const BlockPartition& part,
                       bool scale_unbiased = false, int num_threads = 1);

}  // namespace rmdopt
