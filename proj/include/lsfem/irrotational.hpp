#pragma once

#include "lsfem/polynomial.hpp"

#include <Eigen/Dense>

#include <vector>

namespace lsfem {

/// Basis of the curl-free vector polynomial space of degree m: one field per
/// scalar monomial x^a y^b with 1 <= a + b <= m + 1, stored in local
/// coordinates. Within each total degree the order is x^k, y^k, then the
/// mixed monomials x^(k-1)y ... x y^(k-1); pure-power gradients are divided
/// by their exponent, so the m = 1 basis reads
/// (1,0), (0,1), (x,0), (0,y), (y,x).
class IrrotationalBasis {
 public:
  static IrrotationalBasis build(int m);

  int degree() const { return m_; }
  int size() const { return static_cast<int>(fields_.size()); }
  static int dimension(int m) { return (m + 2) * (m + 3) / 2 - 1; }

  const VectorPoly2& field(int j) const { return fields_[static_cast<std::size_t>(j)]; }
  const Poly2& divergence(int j) const { return divergences_[static_cast<std::size_t>(j)]; }
  const Poly2& curl(int j) const { return curls_[static_cast<std::size_t>(j)]; }

  /// 2 x n_b matrix of field values at a local point (row 0: x components).
  Eigen::Matrix2Xd values_at(const Vec2& local) const;
  /// Row vector of field divergences at a local point (local derivative;
  /// divide by the frame scale for the physical divergence).
  Eigen::RowVectorXd divergences_at(const Vec2& local) const;

 private:
  int m_ = 0;
  std::vector<VectorPoly2> fields_;
  std::vector<Poly2> divergences_;
  std::vector<Poly2> curls_;
};

}  // namespace lsfem
