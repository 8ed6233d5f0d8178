#include "lsfem/irrotational.hpp"

namespace lsfem {

IrrotationalBasis IrrotationalBasis::build(int m) {
  require(m >= 1, "IrrotationalBasis: m must be >= 1");
  IrrotationalBasis basis;
  basis.m_ = m;

  auto add_field = [&basis, m](int a, int b, double norm) {
    Poly2 phi(m + 1);
    phi.at(a, b) = 1.0 / norm;
    VectorPoly2 f;
    f.x = phi.dx();
    f.y = phi.dy();
    basis.fields_.push_back(f);
    basis.divergences_.push_back(f.divergence());
    basis.curls_.push_back(f.curl());
  };

  for (int k = 1; k <= m + 1; ++k) {
    add_field(k, 0, k);
    if (k >= 1) add_field(0, k, k);
    for (int b = 1; b < k; ++b) add_field(k - b, b, 1.0);
  }
  require(basis.size() == dimension(m), "IrrotationalBasis: dimension mismatch");
  return basis;
}

Eigen::Matrix2Xd IrrotationalBasis::values_at(const Vec2& local) const {
  Eigen::Matrix2Xd vals(2, size());
  for (int j = 0; j < size(); ++j) {
    vals(0, j) = fields_[static_cast<std::size_t>(j)].x.eval(local);
    vals(1, j) = fields_[static_cast<std::size_t>(j)].y.eval(local);
  }
  return vals;
}

Eigen::RowVectorXd IrrotationalBasis::divergences_at(const Vec2& local) const {
  Eigen::RowVectorXd divs(size());
  for (int j = 0; j < size(); ++j) divs(j) = divergences_[static_cast<std::size_t>(j)].eval(local);
  return divs;
}

}  // namespace lsfem
