#include "lsfem/pressure_solver.hpp"

#include <algorithm>
#include <cmath>

namespace lsfem {

LagrangeSpace LagrangeSpace::build(const Mesh& mesh, int degree) {
  require(mesh.all_triangles(),
          "LagrangeSpace: mesh has non-simplicial elements; run the flux-only pipeline on "
          "polygonal meshes");
  require(degree >= 1 && degree <= 3, "LagrangeSpace: degree must be in 1..3");

  LagrangeSpace space;
  space.mesh_ = &mesh;
  space.degree_ = degree;
  const int m = degree;

  // reference nodes: vertices, then per-edge nodes, then interior
  space.reference_nodes_ = {{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}};
  const Vec2 ref_v[3] = {{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}};
  for (int e = 0; e < 3; ++e)
    for (int j = 1; j < m; ++j) {
      const double t = static_cast<double>(j) / m;
      space.reference_nodes_.push_back(ref_v[e] + t * (ref_v[(e + 1) % 3] - ref_v[e]));
    }
  for (int i = 1; i < m; ++i)
    for (int j = 1; i + j < m; ++j)
      space.reference_nodes_.push_back({static_cast<double>(i) / m, static_cast<double>(j) / m});

  const int n_loc = static_cast<int>(space.reference_nodes_.size());
  require(n_loc == (m + 1) * (m + 2) / 2, "LagrangeSpace: local node count mismatch");

  // nodal basis via Vandermonde inversion over the P_m monomials
  Eigen::MatrixXd vand(n_loc, n_loc);
  for (int i = 0; i < n_loc; ++i) {
    int idx = 0;
    for (int k = 0; k <= m; ++k)
      for (int b = 0; b <= k; ++b, ++idx) {
        Poly2 mono(m);
        mono.at(k - b, b) = 1.0;
        vand(i, idx) = mono.eval(space.reference_nodes_[static_cast<std::size_t>(i)]);
      }
  }
  const Eigen::MatrixXd coeffs = vand.fullPivLu().inverse();
  for (int j = 0; j < n_loc; ++j) {
    Poly2 phi(m);
    int idx = 0;
    for (int k = 0; k <= m; ++k)
      for (int b = 0; b <= k; ++b, ++idx) phi.at(k - b, b) = coeffs(idx, j);
    space.shape_.push_back(phi);
    space.shape_dx_.push_back(phi.dx());
    space.shape_dy_.push_back(phi.dy());
  }

  // global numbering
  const int n_edge = m - 1;
  const int n_int = (m - 1) * (m - 2) / 2;
  const int edge_base = mesh.num_nodes();
  const int int_base = edge_base + n_edge * mesh.num_faces();
  space.n_dofs_ = int_base + n_int * mesh.num_elements();
  space.dof_positions_.assign(static_cast<std::size_t>(space.n_dofs_), Vec2::Zero());
  for (int v = 0; v < mesh.num_nodes(); ++v)
    space.dof_positions_[static_cast<std::size_t>(v)] = mesh.nodes[static_cast<std::size_t>(v)];
  for (int fid = 0; fid < mesh.num_faces(); ++fid) {
    const Face& f = mesh.faces[static_cast<std::size_t>(fid)];
    const int lo = std::min(f.vertices[0], f.vertices[1]);
    const int hi = std::max(f.vertices[0], f.vertices[1]);
    const Vec2 a = mesh.nodes[static_cast<std::size_t>(lo)];
    const Vec2 b = mesh.nodes[static_cast<std::size_t>(hi)];
    for (int j = 1; j <= n_edge; ++j)
      space.dof_positions_[static_cast<std::size_t>(edge_base + fid * n_edge + (j - 1))] =
          a + (static_cast<double>(j) / m) * (b - a);
  }

  space.element_dofs_.resize(static_cast<std::size_t>(mesh.num_elements()));
  space.jac_inv_t_.resize(static_cast<std::size_t>(mesh.num_elements()));
  space.origin_.resize(static_cast<std::size_t>(mesh.num_elements()));
  for (int k = 0; k < mesh.num_elements(); ++k) {
    const auto& elem = mesh.elements[static_cast<std::size_t>(k)];
    auto& dofs = space.element_dofs_[static_cast<std::size_t>(k)];
    dofs.reserve(static_cast<std::size_t>(n_loc));
    for (int v : elem) dofs.push_back(v);
    // local edge e runs from local vertex e to e + 1
    for (int e = 0; e < 3; ++e) {
      const int ga = elem[static_cast<std::size_t>(e)];
      const int gb = elem[static_cast<std::size_t>((e + 1) % 3)];
      // find the face (ga, gb)
      int fid = -1;
      for (int cand : mesh.element_faces[static_cast<std::size_t>(k)]) {
        const auto& fv = mesh.faces[static_cast<std::size_t>(cand)].vertices;
        if ((fv[0] == ga && fv[1] == gb) || (fv[0] == gb && fv[1] == ga)) {
          fid = cand;
          break;
        }
      }
      require(fid >= 0, "LagrangeSpace: face lookup failed");
      for (int j = 1; j <= n_edge; ++j) {
        const int canonical = ga < gb ? j : m - j;  // slot along the lower->higher direction
        dofs.push_back(edge_base + fid * n_edge + (canonical - 1));
      }
    }
    for (int j = 0; j < n_int; ++j) dofs.push_back(int_base + k * n_int + j);

    const Vec2 p0 = mesh.nodes[static_cast<std::size_t>(elem[0])];
    const Vec2 p1 = mesh.nodes[static_cast<std::size_t>(elem[1])];
    const Vec2 p2 = mesh.nodes[static_cast<std::size_t>(elem[2])];
    Eigen::Matrix2d jac;
    jac << p1.x() - p0.x(), p2.x() - p0.x(), p1.y() - p0.y(), p2.y() - p0.y();
    space.jac_inv_t_[static_cast<std::size_t>(k)] = jac.inverse().transpose();
    space.origin_[static_cast<std::size_t>(k)] = p0;

    // interior dof positions from the element map
    for (int j = 0; j < n_int; ++j) {
      const Vec2 ref = space.reference_nodes_[static_cast<std::size_t>(n_loc - n_int + j)];
      space.dof_positions_[static_cast<std::size_t>(int_base + k * n_int + j)] =
          p0 + ref.x() * (p1 - p0) + ref.y() * (p2 - p0);
    }
  }

  std::vector<char> on_boundary(static_cast<std::size_t>(space.n_dofs_), 0);
  for (int fid = 0; fid < mesh.num_faces(); ++fid) {
    const Face& f = mesh.faces[static_cast<std::size_t>(fid)];
    if (!f.boundary) continue;
    on_boundary[static_cast<std::size_t>(f.vertices[0])] = 1;
    on_boundary[static_cast<std::size_t>(f.vertices[1])] = 1;
    for (int j = 0; j < n_edge; ++j)
      on_boundary[static_cast<std::size_t>(edge_base + fid * n_edge + j)] = 1;
  }
  for (int dof = 0; dof < space.n_dofs_; ++dof)
    if (on_boundary[static_cast<std::size_t>(dof)]) space.boundary_dofs_.push_back(dof);

  return space;
}

Eigen::VectorXd LagrangeSpace::shape_values(const Vec2& ref) const {
  Eigen::VectorXd vals(local_size());
  for (int j = 0; j < local_size(); ++j) vals(j) = shape_[static_cast<std::size_t>(j)].eval(ref);
  return vals;
}

Eigen::Matrix2Xd LagrangeSpace::shape_gradients(const Vec2& ref) const {
  Eigen::Matrix2Xd grads(2, local_size());
  for (int j = 0; j < local_size(); ++j) {
    grads(0, j) = shape_dx_[static_cast<std::size_t>(j)].eval(ref);
    grads(1, j) = shape_dy_[static_cast<std::size_t>(j)].eval(ref);
  }
  return grads;
}

Vec2 LagrangeSpace::to_reference(int element, const Vec2& x) const {
  return jac_inv_t_[static_cast<std::size_t>(element)].transpose() *
         (x - origin_[static_cast<std::size_t>(element)]);
}

Eigen::VectorXd LagrangeSpace::interpolate(const std::function<double(const Vec2&)>& f) const {
  Eigen::VectorXd coeffs(n_dofs_);
  for (int dof = 0; dof < n_dofs_; ++dof) coeffs(dof) = f(dof_positions_[static_cast<std::size_t>(dof)]);
  return coeffs;
}

PressureSystem assemble_pressure_system(const LagrangeSpace& space, const FluxField& flux,
                                        int flux_degree,
                                        const std::function<double(const Vec2&)>& g,
                                        PenaltyMode penalty) {
  const Mesh& mesh = space.mesh();
  const int mu = space.degree();
  TripletBuffer triplets(space.size());
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(space.size());

  const int volume_degree = std::max(2 * mu, (mu - 1) + flux_degree) + 2;
  const QuadratureRule ref_rule = triangle_quadrature(volume_degree);
  // shape data at reference quadrature points is element independent
  std::vector<Eigen::VectorXd> vals(static_cast<std::size_t>(ref_rule.size()));
  std::vector<Eigen::Matrix2Xd> grads(static_cast<std::size_t>(ref_rule.size()));
  for (int q = 0; q < ref_rule.size(); ++q) {
    vals[static_cast<std::size_t>(q)] = space.shape_values(ref_rule.points[static_cast<std::size_t>(q)]);
    grads[static_cast<std::size_t>(q)] =
        space.shape_gradients(ref_rule.points[static_cast<std::size_t>(q)]);
  }

  for (int k = 0; k < mesh.num_elements(); ++k) {
    const auto verts = mesh.element_vertices(k);
    const QuadratureRule rule = map_to_triangle(ref_rule, verts[0], verts[1], verts[2]);
    const Eigen::Matrix2d jit = space.jacobian_inv_t(k);
    const int n = space.local_size();
    Eigen::MatrixXd local = Eigen::MatrixXd::Zero(n, n);
    Eigen::VectorXd local_rhs = Eigen::VectorXd::Zero(n);
    for (int q = 0; q < rule.size(); ++q) {
      const Eigen::Matrix2Xd phys_grads = jit * grads[static_cast<std::size_t>(q)];
      const double w = rule.weights[static_cast<std::size_t>(q)];
      local.noalias() += w * phys_grads.transpose() * phys_grads;
      const Vec2 p = flux(k, rule.points[static_cast<std::size_t>(q)]);
      local_rhs.noalias() += w * phys_grads.transpose() * p;
    }
    triplets.add_block(space.element_dofs(k), local);
    const auto& dofs = space.element_dofs(k);
    for (std::size_t i = 0; i < dofs.size(); ++i)
      rhs[dofs[i]] += local_rhs[static_cast<Eigen::Index>(i)];
  }

  const int face_degree = 2 * mu + 4;
  for (int fid = 0; fid < mesh.num_faces(); ++fid) {
    const Face& face = mesh.faces[static_cast<std::size_t>(fid)];
    if (!face.boundary) continue;
    const int k = face.elements[0];
    const QuadratureRule rule = face_quadrature(mesh, fid, face_degree, 0);
    const double weight = penalty_weight(mesh, face, penalty);
    const int n = space.local_size();
    Eigen::MatrixXd local = Eigen::MatrixXd::Zero(n, n);
    Eigen::VectorXd local_rhs = Eigen::VectorXd::Zero(n);
    for (int q = 0; q < rule.size(); ++q) {
      const Vec2& x = rule.points[static_cast<std::size_t>(q)];
      const Eigen::VectorXd phi = space.shape_values(space.to_reference(k, x));
      const double w = rule.weights[static_cast<std::size_t>(q)];
      local.noalias() += w * phi * phi.transpose();
      local_rhs.noalias() += (w * g(x)) * phi;
    }
    local *= weight;
    triplets.add_block(space.element_dofs(k), local);
    const auto& dofs = space.element_dofs(k);
    for (std::size_t i = 0; i < dofs.size(); ++i)
      rhs[dofs[i]] += weight * local_rhs[static_cast<Eigen::Index>(i)];
  }

  return PressureSystem{SparseSymmetricMatrix::from_triplets(std::move(triplets)), std::move(rhs)};
}

double PressureSolution::value(int element, const Vec2& x) const {
  const Eigen::VectorXd phi = space->shape_values(space->to_reference(element, x));
  const auto& dofs = space->element_dofs(element);
  double v = 0.0;
  for (std::size_t i = 0; i < dofs.size(); ++i)
    v += phi[static_cast<Eigen::Index>(i)] * coefficients[dofs[i]];
  return v;
}

Vec2 PressureSolution::gradient(int element, const Vec2& x) const {
  const Eigen::Matrix2Xd grads =
      space->jacobian_inv_t(element) * space->shape_gradients(space->to_reference(element, x));
  const auto& dofs = space->element_dofs(element);
  Vec2 g = Vec2::Zero();
  for (std::size_t i = 0; i < dofs.size(); ++i)
    g += grads.col(static_cast<Eigen::Index>(i)) * coefficients[dofs[i]];
  return g;
}

PressureSolution solve_pressure(const LagrangeSpace& space, const FluxField& flux,
                                int flux_degree, const std::function<double(const Vec2&)>& g,
                                const PressureOptions& options) {
  const PressureSystem system =
      assemble_pressure_system(space, flux, flux_degree, g, options.penalty);
  PressureSolution sol;
  sol.space = &space;
  if (options.use_dense) {
    sol.coefficients = dense_solve(system.matrix, system.rhs);
    sol.residual = (system.rhs - system.matrix.multiply(sol.coefficients)).norm() /
                   std::max(system.rhs.norm(), 1e-300);
  } else {
    const CgResult cg = cg_solve(system.matrix, system.rhs, options.tol, options.max_iter);
    sol.coefficients = cg.x;
    sol.iterations = cg.iterations;
    sol.residual = cg.relative_residual;
  }
  const int quad_degree = std::max(2 * space.degree(), (space.degree() - 1) + flux_degree) + 2;
  sol.functional_value =
      pressure_functional_value(space.mesh(), sol, flux, g, quad_degree, options.penalty);
  return sol;
}

}  // namespace lsfem
