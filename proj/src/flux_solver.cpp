#include "lsfem/flux_solver.hpp"

#include <algorithm>
#include <cmath>

namespace lsfem {

FluxProblem FluxProblem::with_dirichlet(const Mesh& mesh, const ReconstructionOperator& op,
                                        std::function<double(const Vec2&)> f,
                                        std::function<double(const Vec2&)> g,
                                        std::function<Vec2(const Vec2&)> grad_g) {
  FluxProblem p;
  p.mesh = &mesh;
  p.reconstruction = &op;
  p.source = std::move(f);
  p.boundary_kind = BoundaryKind::Dirichlet;
  p.dirichlet = std::move(g);
  p.dirichlet_gradient = std::move(grad_g);
  return p;
}

FluxProblem FluxProblem::with_neumann(const Mesh& mesh, const ReconstructionOperator& op,
                                      std::function<double(const Vec2&)> f,
                                      std::function<double(const Vec2&)> g_n) {
  FluxProblem p;
  p.mesh = &mesh;
  p.reconstruction = &op;
  p.source = std::move(f);
  p.boundary_kind = BoundaryKind::Neumann;
  p.neumann = std::move(g_n);
  return p;
}

FluxProblem FluxProblem::from_manufactured(const Mesh& mesh, const ReconstructionOperator& op,
                                           const ManufacturedProblem& problem) {
  return with_dirichlet(mesh, op, problem.f, problem.u, problem.grad_u);
}

BoundaryTangentialData::BoundaryTangentialData(const FluxProblem& problem, int fit_degree)
    : problem_(&problem),
      fit_degree_(fit_degree),
      fitted_(static_cast<std::size_t>(problem.mesh->num_faces()), 0),
      fits_(static_cast<std::size_t>(problem.mesh->num_faces())) {}

void BoundaryTangentialData::fit_face(int face) const {
  const Mesh& mesh = *problem_->mesh;
  const Face& f = mesh.faces[static_cast<std::size_t>(face)];
  const Vec2 a = mesh.nodes[static_cast<std::size_t>(f.vertices[0])];
  const Vec2 b = mesh.nodes[static_cast<std::size_t>(f.vertices[1])];
  const int n = fit_degree_ + 1;  // interpolation at n Gauss points
  const QuadratureRule pts = gauss_legendre_unit(n);
  Eigen::MatrixXd vand(n, n);
  Eigen::VectorXd vals(n);
  for (int i = 0; i < n; ++i) {
    const double t = pts.points[static_cast<std::size_t>(i)].x();
    double power = 1.0;
    for (int j = 0; j < n; ++j) {
      vand(i, j) = power;
      power *= t;
    }
    vals(i) = problem_->dirichlet(a + t * (b - a));
  }
  fits_[static_cast<std::size_t>(face)] = vand.fullPivLu().solve(vals);
  fitted_[static_cast<std::size_t>(face)] = 1;
}

double BoundaryTangentialData::cross_at(int face, const Vec2& x) const {
  const Mesh& mesh = *problem_->mesh;
  const Face& f = mesh.faces[static_cast<std::size_t>(face)];
  if (problem_->dirichlet_gradient) {
    const Vec2 grad = problem_->dirichlet_gradient(x);
    return grad.x() * f.normal.y() - grad.y() * f.normal.x();
  }
  if (!fitted_[static_cast<std::size_t>(face)]) fit_face(face);
  const Vec2 a = mesh.nodes[static_cast<std::size_t>(f.vertices[0])];
  const Vec2 b = mesh.nodes[static_cast<std::size_t>(f.vertices[1])];
  const double t = (x - a).dot(b - a) / (b - a).squaredNorm();
  const Eigen::VectorXd& c = fits_[static_cast<std::size_t>(face)];
  double deriv = 0.0, power = 1.0;
  for (int j = 1; j < c.size(); ++j) {
    deriv += j * c(j) * power;
    power *= t;
  }
  // the tangent (n_y, -n_x) is the reversed traversal direction, so
  // (grad g) x n = -dg/ds with s the arclength from a to b
  return -deriv / f.length;
}

namespace {

/// Per-element assembly data shared by volume and face terms.
struct ElementContext {
  std::vector<int> dofs;          // 2 per patch member
  std::vector<int> members;       // patch member element ids
  const Eigen::MatrixXd* coeff_map = nullptr;
  const LocalFrame* frame = nullptr;
};

ElementContext make_context(const ReconstructionOperator& op, int k) {
  ElementContext ctx;
  const ElementPatch& patch = op.patches[static_cast<std::size_t>(k)];
  ctx.members = patch.members;
  ctx.dofs.reserve(2 * patch.members.size());
  for (int member : patch.members) {
    ctx.dofs.push_back(2 * member);
    ctx.dofs.push_back(2 * member + 1);
  }
  ctx.coeff_map = &op.coefficient_maps[static_cast<std::size_t>(k)];
  ctx.frame = &op.frames[static_cast<std::size_t>(k)];
  return ctx;
}

}  // namespace

FluxSystem assemble_flux_system(const FluxProblem& problem) {
  const Mesh& mesh = *problem.mesh;
  const ReconstructionOperator& op = *problem.reconstruction;
  const int m = op.degree;
  require(op.mesh == &mesh, "assemble_flux_system: reconstruction built for another mesh");
  require(static_cast<bool>(problem.source), "assemble_flux_system: missing source term");
  if (problem.boundary_kind == BoundaryKind::Dirichlet)
    require(static_cast<bool>(problem.dirichlet), "assemble_flux_system: missing Dirichlet data");
  else
    require(static_cast<bool>(problem.neumann), "assemble_flux_system: missing Neumann data");

  const int n_dofs = 2 * mesh.num_elements();
  TripletBuffer triplets(n_dofs);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n_dofs);
  BoundaryTangentialData tangential(problem, m + 1);

  std::vector<ElementContext> contexts(static_cast<std::size_t>(mesh.num_elements()));
  for (int k = 0; k < mesh.num_elements(); ++k) contexts[static_cast<std::size_t>(k)] = make_context(op, k);

  // volume terms: sum_K (div p, div q) and -(f, div q)
  const int volume_degree = 2 * m + 8;
  for (int k = 0; k < mesh.num_elements(); ++k) {
    const ElementContext& ctx = contexts[static_cast<std::size_t>(k)];
    const QuadratureRule rule = element_quadrature(mesh, k, volume_degree, 0);
    const int nb = op.basis.size();
    Eigen::MatrixXd div_form = Eigen::MatrixXd::Zero(nb, nb);
    Eigen::VectorXd source_form = Eigen::VectorXd::Zero(nb);
    const double inv_scale = 1.0 / ctx.frame->scale;
    for (int q = 0; q < rule.size(); ++q) {
      const Vec2 local = ctx.frame->to_local(rule.points[static_cast<std::size_t>(q)]);
      const Eigen::RowVectorXd divs = op.basis.divergences_at(local) * inv_scale;
      const double w = rule.weights[static_cast<std::size_t>(q)];
      div_form.noalias() += w * divs.transpose() * divs;
      source_form.noalias() +=
          (w * problem.source(rule.points[static_cast<std::size_t>(q)])) * divs.transpose();
    }
    const Eigen::MatrixXd local = ctx.coeff_map->transpose() * div_form * (*ctx.coeff_map);
    triplets.add_block(ctx.dofs, local);
    const Eigen::VectorXd local_rhs = -ctx.coeff_map->transpose() * source_form;
    for (std::size_t i = 0; i < ctx.dofs.size(); ++i)
      rhs[ctx.dofs[i]] += local_rhs[static_cast<Eigen::Index>(i)];
  }

  // face terms
  const int face_degree = 2 * m + 6;
  for (int fid = 0; fid < mesh.num_faces(); ++fid) {
    const Face& face = mesh.faces[static_cast<std::size_t>(fid)];
    const QuadratureRule rule = face_quadrature(mesh, fid, face_degree, 0);
    const double weight = penalty_weight(mesh, face, problem.penalty);

    if (!face.boundary) {
      const ElementContext& plus = contexts[static_cast<std::size_t>(face.elements[0])];
      const ElementContext& minus = contexts[static_cast<std::size_t>(face.elements[1])];
      // union of the two patch dof sets
      std::vector<int> union_dofs = plus.dofs;
      union_dofs.insert(union_dofs.end(), minus.dofs.begin(), minus.dofs.end());
      std::sort(union_dofs.begin(), union_dofs.end());
      union_dofs.erase(std::unique(union_dofs.begin(), union_dofs.end()), union_dofs.end());
      auto position = [&union_dofs](int dof) {
        return static_cast<int>(std::lower_bound(union_dofs.begin(), union_dofs.end(), dof) -
                                union_dofs.begin());
      };
      std::vector<int> pos_plus, pos_minus;
      pos_plus.reserve(plus.dofs.size());
      for (int dof : plus.dofs) pos_plus.push_back(position(dof));
      pos_minus.reserve(minus.dofs.size());
      for (int dof : minus.dofs) pos_minus.push_back(position(dof));

      const int u = static_cast<int>(union_dofs.size());
      Eigen::MatrixXd local = Eigen::MatrixXd::Zero(u, u);
      Eigen::MatrixXd jump_rows(2, u);
      for (int q = 0; q < rule.size(); ++q) {
        const Vec2& x = rule.points[static_cast<std::size_t>(q)];
        const Eigen::Matrix2Xd z_plus =
            op.basis.values_at(plus.frame->to_local(x)) * (*plus.coeff_map);
        const Eigen::Matrix2Xd z_minus =
            op.basis.values_at(minus.frame->to_local(x)) * (*minus.coeff_map);
        jump_rows.setZero();
        for (std::size_t i = 0; i < pos_plus.size(); ++i)
          jump_rows.col(pos_plus[i]) += z_plus.col(static_cast<Eigen::Index>(i));
        for (std::size_t i = 0; i < pos_minus.size(); ++i)
          jump_rows.col(pos_minus[i]) -= z_minus.col(static_cast<Eigen::Index>(i));
        local.noalias() += rule.weights[static_cast<std::size_t>(q)] *
                           jump_rows.transpose() * jump_rows;
      }
      local *= weight;
      triplets.add_block(union_dofs, local);
    } else {
      const ElementContext& ctx = contexts[static_cast<std::size_t>(face.elements[0])];
      const int n = static_cast<int>(ctx.dofs.size());
      Eigen::MatrixXd local = Eigen::MatrixXd::Zero(n, n);
      Eigen::VectorXd local_rhs = Eigen::VectorXd::Zero(n);
      for (int q = 0; q < rule.size(); ++q) {
        const Vec2& x = rule.points[static_cast<std::size_t>(q)];
        const Eigen::Matrix2Xd z = op.basis.values_at(ctx.frame->to_local(x)) * (*ctx.coeff_map);
        Eigen::RowVectorXd row;
        double data = 0.0;
        if (problem.boundary_kind == BoundaryKind::Dirichlet) {
          row = face.normal.y() * z.row(0) - face.normal.x() * z.row(1);
          data = tangential.cross_at(fid, x);
        } else {
          row = face.normal.x() * z.row(0) + face.normal.y() * z.row(1);
          data = problem.neumann(x);
        }
        const double w = rule.weights[static_cast<std::size_t>(q)];
        local.noalias() += w * row.transpose() * row;
        local_rhs.noalias() += (w * data) * row.transpose();
      }
      local *= weight;
      triplets.add_block(ctx.dofs, local);
      for (std::size_t i = 0; i < ctx.dofs.size(); ++i)
        rhs[ctx.dofs[i]] += weight * local_rhs[static_cast<Eigen::Index>(i)];
    }
  }

  FluxSystem system{SparseSymmetricMatrix::from_triplets(std::move(triplets)), std::move(rhs)};
  return system;
}

FluxSolution solve_flux(const FluxProblem& problem, const SolverOptions& options) {
  const FluxSystem system = assemble_flux_system(problem);
  FluxSolution sol;
  if (options.use_dense) {
    sol.samples = dense_solve(system.matrix, system.rhs);
    sol.residual = (system.rhs - system.matrix.multiply(sol.samples)).norm() /
                   std::max(system.rhs.norm(), 1e-300);
  } else {
    const CgResult cg = cg_solve(system.matrix, system.rhs, options.tol, options.max_iter);
    sol.samples = cg.x;
    sol.iterations = cg.iterations;
    sol.residual = cg.relative_residual;
  }
  sol.field = reconstruct_field(*problem.reconstruction, sol.samples);
  sol.functional_value = flux_functional_value(problem, sol.field);
  return sol;
}

}  // namespace lsfem
