#pragma once

#include "lsfem/linalg.hpp"
#include "lsfem/norms.hpp"
#include "lsfem/polynomial.hpp"

#include <functional>

namespace lsfem {

/// Continuous Lagrange finite element space on a simplicial mesh:
/// equispaced nodal layout, global numbering vertices first, then edge
/// nodes by face id (oriented from the lower vertex id), then interior
/// nodes by element id.
class LagrangeSpace {
 public:
  static LagrangeSpace build(const Mesh& mesh, int degree);

  int degree() const { return degree_; }
  int size() const { return n_dofs_; }
  int local_size() const { return static_cast<int>(reference_nodes_.size()); }
  const Mesh& mesh() const { return *mesh_; }

  const std::vector<int>& element_dofs(int element) const {
    return element_dofs_[static_cast<std::size_t>(element)];
  }
  const std::vector<int>& boundary_dofs() const { return boundary_dofs_; }
  Vec2 dof_position(int dof) const { return dof_positions_[static_cast<std::size_t>(dof)]; }

  const std::vector<Vec2>& reference_nodes() const { return reference_nodes_; }
  Eigen::VectorXd shape_values(const Vec2& ref) const;
  /// Gradients w.r.t. reference coordinates (columns per shape function).
  Eigen::Matrix2Xd shape_gradients(const Vec2& ref) const;

  Vec2 to_reference(int element, const Vec2& x) const;
  const Eigen::Matrix2d& jacobian_inv_t(int element) const {
    return jac_inv_t_[static_cast<std::size_t>(element)];
  }

  /// Nodal interpolant.
  Eigen::VectorXd interpolate(const std::function<double(const Vec2&)>& f) const;

 private:
  const Mesh* mesh_ = nullptr;
  int degree_ = 1;
  int n_dofs_ = 0;
  std::vector<std::vector<int>> element_dofs_;
  std::vector<Vec2> dof_positions_;
  std::vector<int> boundary_dofs_;
  std::vector<Vec2> reference_nodes_;
  std::vector<Poly2> shape_;     // nodal basis on the reference triangle
  std::vector<Poly2> shape_dx_;
  std::vector<Poly2> shape_dy_;
  std::vector<Eigen::Matrix2d> jac_inv_t_;
  std::vector<Vec2> origin_;  // first vertex per element
};

/// Per-element flux data for the right-hand side.
using FluxField = std::function<Vec2(int element, const Vec2& x)>;

struct PressureSystem {
  SparseSymmetricMatrix matrix;
  Eigen::VectorXd rhs;
};

/// a(u, v) = sum_K (grad u, grad v) + sum_bnd 1/h (u, v);
/// l(v) = sum_K (grad v, p_h) + sum_bnd 1/h (v, g).
PressureSystem assemble_pressure_system(const LagrangeSpace& space, const FluxField& flux,
                                        int flux_degree,
                                        const std::function<double(const Vec2&)>& g,
                                        PenaltyMode penalty = PenaltyMode::GlobalH);

struct PressureSolution {
  const LagrangeSpace* space = nullptr;
  Eigen::VectorXd coefficients;
  double functional_value = 0.0;
  int iterations = 0;
  double residual = 0.0;

  double value(int element, const Vec2& x) const;
  Vec2 gradient(int element, const Vec2& x) const;
};

struct PressureOptions {
  double tol = 1e-10;
  int max_iter = -1;
  bool use_dense = false;
  PenaltyMode penalty = PenaltyMode::GlobalH;
};

PressureSolution solve_pressure(const LagrangeSpace& space, const FluxField& flux,
                                int flux_degree, const std::function<double(const Vec2&)>& g,
                                const PressureOptions& options = {});

/// J^u(v) = sum_K ||grad v - p_h||^2 + sum_bnd 1/h ||v - g||^2 for any
/// per-element scalar field (value/gradient interface).
template <class ScalField>
double pressure_functional_value(const Mesh& mesh, const ScalField& v, const FluxField& flux,
                                 const std::function<double(const Vec2&)>& g, int quad_degree,
                                 PenaltyMode penalty = PenaltyMode::GlobalH, int subref = 1) {
  double total = detail::ordered_parallel_sum(mesh.num_elements(), [&](int k) {
    const QuadratureRule rule = element_quadrature(mesh, k, quad_degree, subref);
    double acc = 0.0;
    for (int q = 0; q < rule.size(); ++q) {
      const Vec2& x = rule.points[static_cast<std::size_t>(q)];
      acc += rule.weights[static_cast<std::size_t>(q)] *
             (v.gradient(k, x) - flux(k, x)).squaredNorm();
    }
    return acc;
  });
  for (int fid = 0; fid < mesh.num_faces(); ++fid) {
    const Face& face = mesh.faces[static_cast<std::size_t>(fid)];
    if (!face.boundary) continue;
    const QuadratureRule rule = face_quadrature(mesh, fid, quad_degree, subref);
    double term = 0.0;
    for (int q = 0; q < rule.size(); ++q) {
      const Vec2& x = rule.points[static_cast<std::size_t>(q)];
      const double r = v.value(face.elements[0], x) - g(x);
      term += rule.weights[static_cast<std::size_t>(q)] * r * r;
    }
    total += penalty_weight(mesh, face, penalty) * term;
  }
  return total;
}

}  // namespace lsfem
