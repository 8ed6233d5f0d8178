#include "lsfem/dls.hpp"

#include <cmath>

namespace lsfem {

DiscontinuousSpace DiscontinuousSpace::build(const Mesh& mesh, int degree) {
  require(degree >= 1, "DiscontinuousSpace: degree must be >= 1");
  DiscontinuousSpace space;
  space.mesh_ = &mesh;
  space.degree_ = degree;
  space.block_ = Poly2::dim(degree);
  space.frames_.reserve(static_cast<std::size_t>(mesh.num_elements()));
  for (int k = 0; k < mesh.num_elements(); ++k)
    space.frames_.push_back({barycenter(mesh, k), mesh.element_diameters[static_cast<std::size_t>(k)]});
  for (int k = 0; k <= degree; ++k)
    for (int b = 0; b <= k; ++b) {
      Poly2 mono(degree);
      mono.at(k - b, b) = 1.0;
      space.monomials_.push_back(mono);
      space.mono_dx_.push_back(mono.dx());
      space.mono_dy_.push_back(mono.dy());
    }
  return space;
}

Eigen::VectorXd DiscontinuousSpace::monomials_at(const Vec2& local) const {
  Eigen::VectorXd v(block_);
  for (int j = 0; j < block_; ++j) v(j) = monomials_[static_cast<std::size_t>(j)].eval(local);
  return v;
}
Eigen::VectorXd DiscontinuousSpace::monomials_dx_at(const Vec2& local) const {
  Eigen::VectorXd v(block_);
  for (int j = 0; j < block_; ++j) v(j) = mono_dx_[static_cast<std::size_t>(j)].eval(local);
  return v;
}
Eigen::VectorXd DiscontinuousSpace::monomials_dy_at(const Vec2& local) const {
  Eigen::VectorXd v(block_);
  for (int j = 0; j < block_; ++j) v(j) = mono_dy_[static_cast<std::size_t>(j)].eval(local);
  return v;
}

DlsSystem assemble_dls_system(const DiscontinuousSpace& space,
                              const std::function<double(const Vec2&)>& f,
                              const std::function<double(const Vec2&)>& g) {
  const Mesh& mesh = space.mesh();
  const int m = space.degree();
  const int nb = space.block_size();
  const int n_loc = space.dofs_per_element();
  TripletBuffer triplets(space.size());
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(space.size());

  auto element_dofs = [&space, n_loc](int k) {
    std::vector<int> dofs(static_cast<std::size_t>(n_loc));
    for (int j = 0; j < n_loc; ++j) dofs[static_cast<std::size_t>(j)] = space.element_base(k) + j;
    return dofs;
  };

  // volume: (div p, div q) + (grad u - p, grad v - q); rhs -(f, div q)
  const int volume_degree = 2 * m + 4;
  for (int k = 0; k < mesh.num_elements(); ++k) {
    const QuadratureRule rule = element_quadrature(mesh, k, volume_degree, 0);
    const LocalFrame& frame = space.frame(k);
    const double inv_s = 1.0 / frame.scale;
    Eigen::MatrixXd local = Eigen::MatrixXd::Zero(n_loc, n_loc);
    Eigen::VectorXd local_rhs = Eigen::VectorXd::Zero(n_loc);
    Eigen::RowVectorXd div_row(n_loc), res_x(n_loc), res_y(n_loc);
    for (int q = 0; q < rule.size(); ++q) {
      const Vec2& x = rule.points[static_cast<std::size_t>(q)];
      const Vec2 local_pt = frame.to_local(x);
      const double w = rule.weights[static_cast<std::size_t>(q)];
      const Eigen::VectorXd phi = space.monomials_at(local_pt);
      const Eigen::VectorXd dphix = inv_s * space.monomials_dx_at(local_pt);
      const Eigen::VectorXd dphiy = inv_s * space.monomials_dy_at(local_pt);
      div_row.setZero();
      div_row.segment(nb, nb) = dphix.transpose();
      div_row.segment(2 * nb, nb) = dphiy.transpose();
      res_x.setZero();
      res_x.segment(0, nb) = dphix.transpose();
      res_x.segment(nb, nb) = -phi.transpose();
      res_y.setZero();
      res_y.segment(0, nb) = dphiy.transpose();
      res_y.segment(2 * nb, nb) = -phi.transpose();
      local.noalias() += w * (div_row.transpose() * div_row + res_x.transpose() * res_x +
                              res_y.transpose() * res_y);
      local_rhs.noalias() -= (w * f(x)) * div_row.transpose();
    }
    triplets.add_block(element_dofs(k), local);
    const int base = space.element_base(k);
    for (int j = 0; j < n_loc; ++j) rhs[base + j] += local_rhs[j];
  }

  // interior faces: 1/h ([u][v] + [p (x) n][q (x) n]); boundary: 1/h (u v - g v)
  for (int fid = 0; fid < mesh.num_faces(); ++fid) {
    const Face& face = mesh.faces[static_cast<std::size_t>(fid)];
    const double weight = 1.0 / mesh.h_max;  // 1/h as printed in the functional
    if (!face.boundary) {
      const int kp = face.elements[0];
      const int km = face.elements[1];
      const QuadratureRule rule = face_quadrature(mesh, fid, 2 * m + 2, 0);
      std::vector<int> dofs = element_dofs(kp);
      const std::vector<int> dofs_m = element_dofs(km);
      dofs.insert(dofs.end(), dofs_m.begin(), dofs_m.end());
      Eigen::MatrixXd local = Eigen::MatrixXd::Zero(2 * n_loc, 2 * n_loc);
      Eigen::RowVectorXd ju(2 * n_loc), jp1(2 * n_loc), jp2(2 * n_loc);
      for (int q = 0; q < rule.size(); ++q) {
        const Vec2& x = rule.points[static_cast<std::size_t>(q)];
        const Eigen::VectorXd phi_p = space.monomials_at(space.frame(kp).to_local(x));
        const Eigen::VectorXd phi_m = space.monomials_at(space.frame(km).to_local(x));
        const double w = rule.weights[static_cast<std::size_t>(q)];
        ju.setZero();
        ju.segment(0, nb) = phi_p.transpose();
        ju.segment(n_loc, nb) = -phi_m.transpose();
        jp1.setZero();
        jp1.segment(nb, nb) = phi_p.transpose();
        jp1.segment(n_loc + nb, nb) = -phi_m.transpose();
        jp2.setZero();
        jp2.segment(2 * nb, nb) = phi_p.transpose();
        jp2.segment(n_loc + 2 * nb, nb) = -phi_m.transpose();
        local.noalias() +=
            w * (ju.transpose() * ju + jp1.transpose() * jp1 + jp2.transpose() * jp2);
      }
      local *= weight;
      triplets.add_block(dofs, local);
    } else {
      const int k = face.elements[0];
      const QuadratureRule rule = face_quadrature(mesh, fid, 2 * m + 4, 0);
      Eigen::MatrixXd local = Eigen::MatrixXd::Zero(n_loc, n_loc);
      Eigen::VectorXd local_rhs = Eigen::VectorXd::Zero(n_loc);
      for (int q = 0; q < rule.size(); ++q) {
        const Vec2& x = rule.points[static_cast<std::size_t>(q)];
        const Eigen::VectorXd phi = space.monomials_at(space.frame(k).to_local(x));
        const double w = rule.weights[static_cast<std::size_t>(q)];
        local.block(0, 0, nb, nb).noalias() += w * phi * phi.transpose();
        local_rhs.segment(0, nb).noalias() += (w * g(x)) * phi;
      }
      local *= weight;
      triplets.add_block(element_dofs(k), local);
      const int base = space.element_base(k);
      for (int j = 0; j < n_loc; ++j) rhs[base + j] += weight * local_rhs[j];
    }
  }

  return DlsSystem{SparseSymmetricMatrix::from_triplets(std::move(triplets)), std::move(rhs)};
}

double DlsSolution::value_u(int element, const Vec2& x) const {
  const int nb = space->block_size();
  const Vec2 local = space->frame(element).to_local(x);
  return space->monomials_at(local)
      .dot(coefficients.segment(space->element_base(element), nb));
}

Vec2 DlsSolution::grad_u(int element, const Vec2& x) const {
  const int nb = space->block_size();
  const LocalFrame& frame = space->frame(element);
  const Vec2 local = frame.to_local(x);
  const auto block = coefficients.segment(space->element_base(element), nb);
  return Vec2(space->monomials_dx_at(local).dot(block),
              space->monomials_dy_at(local).dot(block)) /
         frame.scale;
}

Vec2 DlsSolution::value_p(int element, const Vec2& x) const {
  const int nb = space->block_size();
  const Vec2 local = space->frame(element).to_local(x);
  const Eigen::VectorXd phi = space->monomials_at(local);
  const int base = space->element_base(element);
  return Vec2(phi.dot(coefficients.segment(base + nb, nb)),
              phi.dot(coefficients.segment(base + 2 * nb, nb)));
}

double DlsSolution::div_p(int element, const Vec2& x) const {
  const int nb = space->block_size();
  const LocalFrame& frame = space->frame(element);
  const Vec2 local = frame.to_local(x);
  const int base = space->element_base(element);
  return (space->monomials_dx_at(local).dot(coefficients.segment(base + nb, nb)) +
          space->monomials_dy_at(local).dot(coefficients.segment(base + 2 * nb, nb))) /
         frame.scale;
}

DlsSolution solve_dls(const DiscontinuousSpace& space,
                      const std::function<double(const Vec2&)>& f,
                      const std::function<double(const Vec2&)>& g, const DlsOptions& options) {
  const DlsSystem system = assemble_dls_system(space, f, g);
  DlsSolution sol;
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
  return sol;
}

}  // namespace lsfem
