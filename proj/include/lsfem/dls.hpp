#pragma once

#include "lsfem/linalg.hpp"
#include "lsfem/norms.hpp"
#include "lsfem/polynomial.hpp"

#include <functional>

namespace lsfem {

/// Element-wise monomial spaces of the one-shot discontinuous least-squares
/// method: a scalar P_m block and two flux component blocks per element, all
/// in element-local scaled coordinates.
class DiscontinuousSpace {
 public:
  static DiscontinuousSpace build(const Mesh& mesh, int degree);

  int degree() const { return degree_; }
  int block_size() const { return block_; }           // dim P_m
  int dofs_per_element() const { return 3 * block_; }
  int size() const { return 3 * block_ * mesh_->num_elements(); }
  const Mesh& mesh() const { return *mesh_; }
  const LocalFrame& frame(int element) const { return frames_[static_cast<std::size_t>(element)]; }

  int element_base(int element) const { return 3 * block_ * element; }

  /// Monomial values / local-coordinate derivatives at a local point.
  Eigen::VectorXd monomials_at(const Vec2& local) const;
  Eigen::VectorXd monomials_dx_at(const Vec2& local) const;
  Eigen::VectorXd monomials_dy_at(const Vec2& local) const;

 private:
  const Mesh* mesh_ = nullptr;
  int degree_ = 1;
  int block_ = 0;
  std::vector<LocalFrame> frames_;
  std::vector<Poly2> monomials_, mono_dx_, mono_dy_;
};

struct DlsSystem {
  SparseSymmetricMatrix matrix;
  Eigen::VectorXd rhs;
};

DlsSystem assemble_dls_system(const DiscontinuousSpace& space,
                              const std::function<double(const Vec2&)>& f,
                              const std::function<double(const Vec2&)>& g);

/// Coupled (u_h, p_h) solution with per-element polynomial evaluators.
struct DlsSolution {
  const DiscontinuousSpace* space = nullptr;
  Eigen::VectorXd coefficients;
  int iterations = 0;
  double residual = 0.0;

  double value_u(int element, const Vec2& x) const;
  Vec2 grad_u(int element, const Vec2& x) const;
  Vec2 value_p(int element, const Vec2& x) const;
  double div_p(int element, const Vec2& x) const;
};

struct DlsOptions {
  double tol = 1e-10;
  int max_iter = -1;
  bool use_dense = false;
};

DlsSolution solve_dls(const DiscontinuousSpace& space,
                      const std::function<double(const Vec2&)>& f,
                      const std::function<double(const Vec2&)>& g,
                      const DlsOptions& options = {});

/// Adaptors for the error-norm templates.
struct DlsScalarView {
  const DlsSolution* sol;
  double value(int k, const Vec2& x) const { return sol->value_u(k, x); }
  Vec2 gradient(int k, const Vec2& x) const { return sol->grad_u(k, x); }
};
struct DlsVectorView {
  const DlsSolution* sol;
  Vec2 value(int k, const Vec2& x) const { return sol->value_p(k, x); }
  double divergence(int k, const Vec2& x) const { return sol->div_p(k, x); }
};

}  // namespace lsfem
