#include "rmdopt/scgd.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <numeric>
#include <thread>

namespace rmdopt {

BlockPartition sample_partition(int n, int K, SeededRng& rng) {
  if (K < 1 || K > n) {
    throw InvalidK("sample_partition: need 1 <= K <= n, got K = " +
                   std::to_string(K) + ", n = " + std::to_string(n));
  }
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  // Fisher-Yates with the portable stream (std::shuffle is not
  // implementation-stable).
  for (int i = n - 1; i > 0; --i) {
    const int j = static_cast<int>(rng.next_u64() % (i + 1));
    std::swap(perm[i], perm[j]);
  }

  BlockPartition part;
  part.n = n;
  part.blocks.resize(K);
  int offset = 0;
  for (int k = 0; k < K; ++k) {
    const int size = n / K + (k < n % K ? 1 : 0);
    part.blocks[k].assign(perm.begin() + offset, perm.begin() + offset + size);
    std::sort(part.blocks[k].begin(), part.blocks[k].end());
    offset += size;
  }
  return part;
}

namespace {

void enumerate_rec(std::vector<int>& pool, int block_size,
                   std::vector<std::vector<int>>& current,
                   std::vector<BlockPartition>& out, int n) {
  if (pool.empty()) {
    BlockPartition part;
    part.n = n;
    part.blocks = current;
    out.push_back(std::move(part));
    return;
  }
  // Anchor each block at the smallest remaining index so unordered
  // partitions are produced exactly once.
  const int anchor = pool.front();
  std::vector<int> rest(pool.begin() + 1, pool.end());
  const int need = block_size - 1;
  // Iterate over combinations of `rest` of size `need`.
  std::vector<int> idx(need);
  std::iota(idx.begin(), idx.end(), 0);
  const int m = static_cast<int>(rest.size());
  while (true) {
    std::vector<int> block{anchor};
    for (int i : idx) block.push_back(rest[i]);
    std::vector<int> remaining;
    for (int i = 0, j = 0; i < m; ++i) {
      if (j < need && idx[j] == i) {
        ++j;
      } else {
        remaining.push_back(rest[i]);
      }
    }
    current.push_back(block);
    enumerate_rec(remaining, block_size, current, out, n);
    current.pop_back();

    // Next combination.
    int i = need - 1;
    while (i >= 0 && idx[i] == m - need + i) --i;
    if (i < 0) break;
    ++idx[i];
    for (int j = i + 1; j < need; ++j) idx[j] = idx[j - 1] + 1;
  }
}

}  // namespace

std::vector<BlockPartition> enumerate_equal_partitions(int n, int K) {
  if (K < 1 || K > n || n % K != 0) {
    throw InvalidK("enumerate_equal_partitions: K must divide n");
  }
  std::vector<int> pool(n);
  std::iota(pool.begin(), pool.end(), 0);
  std::vector<std::vector<int>> current;
  std::vector<BlockPartition> out;
  enumerate_rec(pool, n / K, current, out, n);
  return out;
}

namespace {

void check_partition_shape(const StiefelPoint& X, const Matrix& G,
                           const BlockPartition& part, const char* op) {
  if (G.rows() != X.n() || G.cols() != X.p()) {
    throw DimensionMismatch(std::string(op) + ": gradient shape mismatch");
  }
  if (part.n != X.n()) {
    throw DimensionMismatch(std::string(op) + ": partition covers " +
                            std::to_string(part.n) + " rows, X has " +
                            std::to_string(X.n()));
  }
}

Matrix gather_rows(const Matrix& M, const std::vector<int>& rows) {
  Matrix out(static_cast<Index>(rows.size()), M.cols());
  for (size_t i = 0; i < rows.size(); ++i) {
    out.row(static_cast<Index>(i)) = M.row(rows[i]);
  }
  return out;
}

}  // namespace

BlockSkewSet block_skew_set(const StiefelPoint& X, const Matrix& G_euclid,
                            const BlockPartition& part) {
  check_partition_shape(X, G_euclid, part, "block_skew_set");
  BlockSkewSet set;
  set.partition = part;
  set.blocks.reserve(part.blocks.size());
  for (const auto& rows : part.blocks) {
    const Matrix Xk = gather_rows(X.matrix(), rows);
    const Matrix Gk = gather_rows(G_euclid, rows);
    const Matrix A = Gk * Xk.transpose();
    set.blocks.emplace_back(A - A.transpose());
  }
  return set;
}

double unbiased_scale(const BlockPartition& part) {
  const double n = part.n;
  if (part.n <= 1) {
    return 1.0;
  }
  double p_same = 0.0;
  for (const auto& rows : part.blocks) {
    const double s = static_cast<double>(rows.size());
    p_same += s * (s - 1.0);
  }
  p_same /= n * (n - 1.0);
  if (p_same == 0.0) {
    throw DegenerateScale("unbiased_scale: all blocks are singletons");
  }
  return 1.0 / p_same;
}

SkewMatrix estimate_full_skew(const BlockSkewSet& bs) {
  const int n = bs.partition.n;
  const double scale = unbiased_scale(bs.partition);
  Matrix W_hat = Matrix::Zero(n, n);
  for (size_t k = 0; k < bs.blocks.size(); ++k) {
    const auto& rows = bs.partition.blocks[k];
    const Matrix& Wk = bs.blocks[k].matrix();
    for (size_t i = 0; i < rows.size(); ++i) {
      for (size_t j = 0; j < rows.size(); ++j) {
        W_hat(rows[i], rows[j]) = scale * Wk(static_cast<Index>(i),
                                             static_cast<Index>(j));
      }
    }
  }
  return SkewMatrix(std::move(W_hat));
}

StiefelPoint scgd_step(const StiefelPoint& X, const Matrix& G_euclid,
                       double eta, const BlockPartition& part,
                       bool scale_unbiased, int num_threads) {
  check_partition_shape(X, G_euclid, part, "scgd_step");
  const double scale = scale_unbiased ? unbiased_scale(part) : 1.0;
  const int K = part.num_blocks();
  Matrix Y(X.n(), X.p());

  auto solve_block = [&](int k) {
    const auto& rows = part.blocks[k];
    const Index s = static_cast<Index>(rows.size());
    const Matrix Xk = gather_rows(X.matrix(), rows);
    const Matrix Gk = gather_rows(G_euclid, rows);
    const Matrix A = Gk * Xk.transpose();
    const Matrix half = (scale * eta / 2.0) * (A - A.transpose());
    const Matrix I = Matrix::Identity(s, s);
    Matrix Yk;
    try {
      Yk = solve_dense(I + half, (I - half) * Xk);
    } catch (Error& e) {
      e.prepend_context("scgd_step: block " + std::to_string(k));
      throw;
    }
    for (size_t i = 0; i < rows.size(); ++i) {
      Y.row(rows[i]) = Yk.row(static_cast<Index>(i));
    }
  };

  if (num_threads <= 1 || K == 1) {
    for (int k = 0; k < K; ++k) solve_block(k);
  } else {
    // Disjoint row writes, deterministic per-block work: result equals the
    // sequential loop.
    std::exception_ptr first_error;
    std::mutex err_mutex;
    std::atomic<int> next{0};
    const int workers = std::min(num_threads, K);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (int k = next.fetch_add(1); k < K; k = next.fetch_add(1)) {
          try {
            solve_block(k);
          } catch (...) {
            std::lock_guard<std::mutex> lock(err_mutex);
            if (!first_error) first_error = std::current_exception();
          }
        }
      });
    }
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
  }

  return StiefelPoint(std::move(Y));
}

}  // namespace rmdopt
