#include "lsfem/linalg.hpp"

#include <cmath>

namespace lsfem {

SparseSymmetricMatrix SparseSymmetricMatrix::from_triplets(TripletBuffer&& buffer) {
  return from_sparse(buffer.finish());
}

SparseSymmetricMatrix SparseSymmetricMatrix::from_sparse(const Eigen::SparseMatrix<double>& a) {
  require(a.rows() == a.cols(), "SparseSymmetricMatrix: matrix must be square");
  Eigen::SparseMatrix<double> at = a.transpose();
  double scale = 0.0;
  for (int k = 0; k < a.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(a, k); it; ++it)
      scale = std::max(scale, std::abs(it.value()));
  const Eigen::SparseMatrix<double> skew = a - at;
  double asym = 0.0;
  for (int k = 0; k < skew.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(skew, k); it; ++it)
      asym = std::max(asym, std::abs(it.value()));
  require(scale == 0.0 || asym <= 1e-12 * scale,
          "SparseSymmetricMatrix: assembled matrix is not symmetric (relative asymmetry " +
              std::to_string(asym / scale) + ")");

  Eigen::SparseMatrix<double> sym = 0.5 * (a + at);
  if (scale > 0.0) sym.prune(1e-15, scale);

  SparseSymmetricMatrix out;
  out.csr_ = sym;
  return out;
}

CgResult cg_solve(const SparseSymmetricMatrix& a, const Eigen::VectorXd& b, double tol,
                  int max_iter) {
  const int n = a.size();
  require(b.size() == n, "cg_solve: size mismatch");
  CgResult res;
  res.x = Eigen::VectorXd::Zero(n);

  const double bnorm = b.norm();
  if (bnorm == 0.0) {
    res.converged = true;
    return res;
  }

  const Eigen::VectorXd diag = a.diagonal();
  for (int i = 0; i < n; ++i)
    require(diag[i] != 0.0, "cg_solve: zero diagonal entry at row " + std::to_string(i));
  const Eigen::VectorXd inv_diag = diag.cwiseInverse();

  if (max_iter < 0) max_iter = 100 * n;

  Eigen::VectorXd r = b;
  Eigen::VectorXd z = inv_diag.cwiseProduct(r);
  Eigen::VectorXd p = z;
  double rz = r.dot(z);
  res.residual_history.push_back(std::sqrt(rz));

  for (int it = 0; it < max_iter; ++it) {
    const Eigen::VectorXd ap = a.multiply(p);
    const double pap = p.dot(ap);
    require(pap > 0.0, "cg_solve: matrix is not positive definite (p'Ap <= 0)");
    const double alpha = rz / pap;
    res.x += alpha * p;
    r -= alpha * ap;
    z = inv_diag.cwiseProduct(r);
    const double rz_next = r.dot(z);
    res.residual_history.push_back(std::sqrt(std::max(rz_next, 0.0)));
    res.iterations = it + 1;
    if (r.norm() / bnorm <= tol) {
      // recompute to certify against accumulated drift
      r = b - a.multiply(res.x);
      if (r.norm() / bnorm <= tol) {
        res.converged = true;
        break;
      }
      z = inv_diag.cwiseProduct(r);
      p = z;
      rz = r.dot(z);
      continue;
    }
    const double beta = rz_next / rz;
    rz = rz_next;
    p = z + beta * p;
  }

  res.relative_residual = (b - a.multiply(res.x)).norm() / bnorm;
  if (!res.converged)
    throw Error("cg_solve: no convergence after " + std::to_string(res.iterations) +
                " iterations (relative residual " + std::to_string(res.relative_residual) + ")");
  return res;
}

Eigen::VectorXd dense_solve(const SparseSymmetricMatrix& a, const Eigen::VectorXd& b) {
  require(a.size() <= 5000, "dense_solve: system too large (n > 5000)");
  return dense_solve(a.dense(), b);
}

Eigen::VectorXd dense_solve(const Eigen::MatrixXd& a, const Eigen::VectorXd& b) {
  require(a.rows() == a.cols() && a.rows() == b.size(), "dense_solve: size mismatch");
  Eigen::LLT<Eigen::MatrixXd> llt(a);
  require(llt.info() == Eigen::Success,
          "dense_solve: Cholesky factorization failed (matrix not SPD)");
  return llt.solve(b);
}

}  // namespace lsfem
