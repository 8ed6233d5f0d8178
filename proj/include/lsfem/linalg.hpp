#pragma once

#include "lsfem/common.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <vector>

namespace lsfem {

/// Triplet accumulator with bounded memory: pending entries are folded into
/// a sparse accumulator once the buffer grows past a threshold. Duplicate
/// (i, j) entries are summed in insertion order.
class TripletBuffer {
 public:
  explicit TripletBuffer(int n, std::size_t flush_limit = std::size_t{1} << 23)
      : n_(n), flush_limit_(flush_limit), acc_(n, n) {}

  void add(int i, int j, double value) {
    pending_.emplace_back(i, j, value);
    if (pending_.size() >= flush_limit_) flush();
  }

  /// Scatters a dense local matrix to the global rows/cols in `dofs`.
  void add_block(const std::vector<int>& dofs, const Eigen::MatrixXd& local) {
    const int s = static_cast<int>(dofs.size());
    for (int i = 0; i < s; ++i)
      for (int j = 0; j < s; ++j) {
        const double v = local(i, j);
        if (v != 0.0) add(dofs[static_cast<std::size_t>(i)], dofs[static_cast<std::size_t>(j)], v);
      }
  }

  Eigen::SparseMatrix<double> finish() {
    flush();
    return std::move(acc_);
  }

  int size() const { return n_; }

 private:
  void flush() {
    if (pending_.empty()) return;
    Eigen::SparseMatrix<double> chunk(n_, n_);
    chunk.setFromTriplets(pending_.begin(), pending_.end());
    acc_ += chunk;
    pending_.clear();
  }

  int n_;
  std::size_t flush_limit_;
  Eigen::SparseMatrix<double> acc_;
  std::vector<Eigen::Triplet<double>> pending_;
};

/// Sparse symmetric matrix in compressed row storage. Construction certifies
/// symmetry (relative asymmetry <= 1e-12, symmetrized away) and prunes
/// explicit zeros below 1e-15 of the largest entry.
class SparseSymmetricMatrix {
 public:
  static SparseSymmetricMatrix from_triplets(TripletBuffer&& buffer);
  static SparseSymmetricMatrix from_sparse(const Eigen::SparseMatrix<double>& a);

  int size() const { return static_cast<int>(csr_.rows()); }
  std::int64_t non_zeros() const { return csr_.nonZeros(); }
  const Eigen::SparseMatrix<double, Eigen::RowMajor>& csr() const { return csr_; }

  Eigen::VectorXd multiply(const Eigen::VectorXd& x) const { return csr_ * x; }
  Eigen::VectorXd diagonal() const { return csr_.diagonal(); }
  Eigen::MatrixXd dense() const { return Eigen::MatrixXd(csr_); }

 private:
  Eigen::SparseMatrix<double, Eigen::RowMajor> csr_;
};

struct CgResult {
  Eigen::VectorXd x;
  int iterations = 0;
  double relative_residual = 0.0;
  bool converged = false;
  /// Preconditioned residual norm sqrt(r' M^-1 r) per iteration (entry 0 is
  /// the initial residual).
  std::vector<double> residual_history;
};

/// Jacobi-preconditioned conjugate gradients for SPD systems. Converges when
/// ||Ax - b|| / ||b|| <= tol; throws on non-convergence or zero diagonal.
/// max_iter < 0 selects the default 100 * n.
CgResult cg_solve(const SparseSymmetricMatrix& a, const Eigen::VectorXd& b, double tol = 1e-12,
                  int max_iter = -1);

/// Cholesky solve after densification; the small-system / oracle path.
/// Guarded to n <= 5000; factorization failure reports a non-SPD matrix.
Eigen::VectorXd dense_solve(const SparseSymmetricMatrix& a, const Eigen::VectorXd& b);
Eigen::VectorXd dense_solve(const Eigen::MatrixXd& a, const Eigen::VectorXd& b);

}  // namespace lsfem
