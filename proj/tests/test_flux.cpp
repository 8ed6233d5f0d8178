#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lsfem/flux_solver.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <random>
#include <sstream>

using namespace lsfem;

namespace {

Mesh pinwheel_mesh() {
  std::istringstream in(
      "nodes 5\n0 0\n1 0\n1 1\n0 1\n0.5 0.5\n"
      "elements 4\n3 0 1 4\n3 1 2 4\n3 2 3 4\n3 3 0 4\n");
  return read_mesh(in);
}

ManufacturedProblem paraboloid() {
  ManufacturedProblem p;
  p.name = "paraboloid";
  p.u = [](const Vec2& x) { return x.squaredNorm(); };
  p.grad_u = [](const Vec2& x) { return Vec2(2.0 * x); };
  p.f = [](const Vec2&) { return -4.0; };
  return p;
}

/// Brute-force evaluation of the bilinear form a(lambda_j, lambda_i) through
/// the reconstructed global basis functions and plain quadrature; fully
/// independent of the scatter-based assembly.
Eigen::MatrixXd dense_form_oracle(const FluxProblem& problem) {
  const Mesh& mesh = *problem.mesh;
  const ReconstructionOperator& op = *problem.reconstruction;
  const int n = 2 * mesh.num_elements();
  const int qdeg = 2 * op.degree + 6;

  std::vector<ReconstructedField> basis;
  basis.reserve(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j)
    basis.push_back(reconstruct_field(op, Eigen::VectorXd::Unit(n, j)));

  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double val = 0.0;
      for (int k = 0; k < mesh.num_elements(); ++k) {
        const QuadratureRule rule = element_quadrature(mesh, k, qdeg, 0);
        for (int q = 0; q < rule.size(); ++q)
          val += rule.weights[static_cast<std::size_t>(q)] *
                 basis[static_cast<std::size_t>(i)].divergence(k, rule.points[static_cast<std::size_t>(q)]) *
                 basis[static_cast<std::size_t>(j)].divergence(k, rule.points[static_cast<std::size_t>(q)]);
      }
      for (int fid = 0; fid < mesh.num_faces(); ++fid) {
        const Face& face = mesh.faces[static_cast<std::size_t>(fid)];
        const QuadratureRule rule = face_quadrature(mesh, fid, qdeg, 0);
        const double w = penalty_weight(mesh, face, problem.penalty);
        for (int q = 0; q < rule.size(); ++q) {
          const Vec2& x = rule.points[static_cast<std::size_t>(q)];
          if (!face.boundary) {
            const Vec2 ji = basis[static_cast<std::size_t>(i)].value(face.elements[0], x) -
                            basis[static_cast<std::size_t>(i)].value(face.elements[1], x);
            const Vec2 jj = basis[static_cast<std::size_t>(j)].value(face.elements[0], x) -
                            basis[static_cast<std::size_t>(j)].value(face.elements[1], x);
            val += w * rule.weights[static_cast<std::size_t>(q)] * ji.dot(jj);
          } else if (problem.boundary_kind == BoundaryKind::Dirichlet) {
            const Vec2 vi = basis[static_cast<std::size_t>(i)].value(face.elements[0], x);
            const Vec2 vj = basis[static_cast<std::size_t>(j)].value(face.elements[0], x);
            const double ci = vi.x() * face.normal.y() - vi.y() * face.normal.x();
            const double cj = vj.x() * face.normal.y() - vj.y() * face.normal.x();
            val += w * rule.weights[static_cast<std::size_t>(q)] * ci * cj;
          } else {
            const double ci = basis[static_cast<std::size_t>(i)].value(face.elements[0], x).dot(face.normal);
            const double cj = basis[static_cast<std::size_t>(j)].value(face.elements[0], x).dot(face.normal);
            val += w * rule.weights[static_cast<std::size_t>(q)] * ci * cj;
          }
        }
      }
      a(i, j) = val;
    }
  return a;
}

}  // namespace

TEST_CASE("zero data gives a zero right-hand side and the zero flux") {
  const Mesh mesh = build_structured_triangle_mesh(3);
  const ReconstructionOperator op = build_reconstruction(mesh, 1);
  const FluxProblem problem = FluxProblem::with_dirichlet(
      mesh, op, [](const Vec2&) { return 0.0; }, [](const Vec2&) { return 0.0; },
      [](const Vec2&) { return Vec2(Vec2::Zero()); });
  const FluxSystem system = assemble_flux_system(problem);
  CHECK(system.rhs.norm() == 0.0);
  const FluxSolution sol = solve_flux(problem);
  CHECK(sol.samples.norm() == 0.0);
  CHECK(sol.iterations == 0);
}

TEST_CASE("sparse assembly matches the dense form oracle entrywise") {
  const Mesh meshes[2] = {pinwheel_mesh(), build_structured_triangle_mesh(2)};
  for (const Mesh& mesh : meshes) {
    const ReconstructionOperator op =
        build_reconstruction(mesh, 1, std::min(6, mesh.num_elements()));
    const ManufacturedProblem p = paraboloid();
    const FluxProblem problem = FluxProblem::from_manufactured(mesh, op, p);
    const Eigen::MatrixXd sparse = assemble_flux_system(problem).matrix.dense();
    const Eigen::MatrixXd oracle = dense_form_oracle(problem);
    const double scale = oracle.cwiseAbs().maxCoeff();
    CHECK((sparse - oracle).cwiseAbs().maxCoeff() <= 1e-12 * scale);
  }
}

TEST_CASE("assembled matrix is symmetric positive definite on a 50-element mesh") {
  const Mesh mesh = build_structured_triangle_mesh(5);
  REQUIRE(mesh.num_elements() == 50);
  const ReconstructionOperator op = build_reconstruction(mesh, 1);
  const FluxProblem problem = FluxProblem::from_manufactured(mesh, op, example1());
  const Eigen::MatrixXd a = assemble_flux_system(problem).matrix.dense();
  CHECK((a - a.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * a.cwiseAbs().maxCoeff());
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(a);
  CHECK(eig.eigenvalues().minCoeff() > 0.0);
}

TEST_CASE("exact flux reproduction: u = x^2 + y^2, m = 1") {
  const ManufacturedProblem p = paraboloid();
  for (const Mesh& mesh : {build_structured_triangle_mesh(4), pinwheel_mesh()}) {
    const ReconstructionOperator op =
        build_reconstruction(mesh, 1, std::min(6, mesh.num_elements()));
    const FluxProblem problem = FluxProblem::from_manufactured(mesh, op, p);
    SolverOptions options;
    options.tol = 1e-13;
    const FluxSolution sol = solve_flux(problem, options);
    const ErrorNorms err = flux_errors(mesh, p, sol, 1, PenaltyMode::GlobalH, 0);
    CHECK(err.l2 <= 1e-7);
    CHECK(sol.functional_value <= 1e-12);
  }
}

TEST_CASE("quadratic form equals the energy norm squared on random fields") {
  const Mesh mesh = build_structured_triangle_mesh(3);
  ManufacturedProblem zero;
  zero.u = [](const Vec2&) { return 0.0; };
  zero.grad_u = [](const Vec2&) { return Vec2(Vec2::Zero()); };
  zero.f = [](const Vec2&) { return 0.0; };
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (PenaltyMode mode : {PenaltyMode::GlobalH, PenaltyMode::FaceH}) {
    for (int m : {1, 2}) {
      const ReconstructionOperator op = build_reconstruction(mesh, m);
      FluxProblem problem = FluxProblem::from_manufactured(mesh, op, zero);
      problem.penalty = mode;
      const FluxSystem system = assemble_flux_system(problem);
      for (int trial = 0; trial < 5; ++trial) {
        Eigen::VectorXd g(2 * mesh.num_elements());
        for (int i = 0; i < g.size(); ++i) g[i] = dist(rng);
        const ReconstructedField q = reconstruct_field(op, g);
        const double quad_form = g.dot(system.matrix.multiply(g));
        const ErrorNorms norms = flux_errors(mesh, zero, q, m, mode, 0);
        CHECK(quad_form ==
              doctest::Approx(norms.energy * norms.energy).epsilon(1e-10));
      }
    }
  }
}

TEST_CASE("L2 norm controlled by the energy norm across refinements") {
  std::mt19937 rng(23);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  ManufacturedProblem zero;
  zero.u = [](const Vec2&) { return 0.0; };
  zero.grad_u = [](const Vec2&) { return Vec2(Vec2::Zero()); };
  zero.f = [](const Vec2&) { return 0.0; };
  std::vector<double> ratios;
  for (int n : {4, 8, 16}) {
    const Mesh mesh = build_structured_triangle_mesh(n);
    const ReconstructionOperator op = build_reconstruction(mesh, 1);
    double worst = 0.0;
    for (int trial = 0; trial < 5; ++trial) {
      Eigen::VectorXd g(2 * mesh.num_elements());
      for (int i = 0; i < g.size(); ++i) g[i] = dist(rng);
      const ReconstructedField q = reconstruct_field(op, g);
      const ErrorNorms norms = flux_errors(mesh, zero, q, 1, PenaltyMode::GlobalH, 0);
      worst = std::max(worst, norms.l2 / norms.energy);
    }
    ratios.push_back(worst);
    MESSAGE("n = ", n, ": max |q|_L2 / |||q|||_p = ", worst);
  }
  for (double r : ratios) CHECK(r <= 2.0 * ratios.front() + 1.0);
}

TEST_CASE("Galerkin residual small at the solution") {
  const Mesh mesh = build_structured_triangle_mesh(4);
  const ReconstructionOperator op = build_reconstruction(mesh, 2);
  const FluxProblem problem = FluxProblem::from_manufactured(mesh, op, example1());
  const FluxSolution sol = solve_flux(problem);
  CHECK(sol.residual < 1e-8);
}

TEST_CASE("pipeline invariant under element renumbering") {
  const Mesh mesh = build_structured_triangle_mesh(3);
  Mesh shuffled = mesh;
  std::mt19937 rng(97);
  std::shuffle(shuffled.elements.begin(), shuffled.elements.end(), rng);
  compute_topology(shuffled);

  const ManufacturedProblem p = example1();
  SolverOptions options;
  options.tol = 1e-13;
  const ReconstructionOperator op1 = build_reconstruction(mesh, 1);
  const FluxSolution sol1 = solve_flux(FluxProblem::from_manufactured(mesh, op1, p), options);
  const ReconstructionOperator op2 = build_reconstruction(shuffled, 1);
  const FluxSolution sol2 =
      solve_flux(FluxProblem::from_manufactured(shuffled, op2, p), options);

  std::uniform_real_distribution<double> dist(0.02, 0.98);
  for (int trial = 0; trial < 50; ++trial) {
    const Vec2 x(dist(rng), dist(rng));
    const int k1 = locate_element(mesh, x);
    const int k2 = locate_element(shuffled, x);
    if (k1 < 0 || k2 < 0) continue;
    CHECK((sol1.value(k1, x) - sol2.value(k2, x)).norm() < 1e-8);
  }
}

TEST_CASE("minimality: J(p_h) <= J(R^m grad u)") {
  const Mesh mesh = build_structured_triangle_mesh(4);
  const ManufacturedProblem p = example1();
  for (int m : {1, 2}) {
    const ReconstructionOperator op = build_reconstruction(mesh, m);
    const FluxProblem problem = FluxProblem::from_manufactured(mesh, op, p);
    const FluxSolution sol = solve_flux(problem);
    const ReconstructedField interpolant =
        reconstruct_field(op, sample_vector_field(mesh, p.grad_u));
    const double j_interp = flux_functional_value(problem, interpolant);
    CHECK(sol.functional_value <= j_interp * (1.0 + 1e-10));
  }
}

TEST_CASE("functional value: exact gradient gives (near) zero") {
  const Mesh mesh = build_structured_triangle_mesh(4);
  const ManufacturedProblem p = example1();
  const ReconstructionOperator op = build_reconstruction(mesh, 1);
  const FluxProblem problem = FluxProblem::from_manufactured(mesh, op, p);
  struct ExactField {
    const ManufacturedProblem* p;
    Vec2 value(int, const Vec2& x) const { return p->grad_u(x); }
    double divergence(int, const Vec2& x) const { return -p->f(x); }
  };
  CHECK(flux_functional_value(problem, ExactField{&p}, 2) < 1e-10);
}

TEST_CASE("functional value: q = 0, f = 1 matches the closed form") {
  const Mesh mesh = build_structured_triangle_mesh(2);
  const ReconstructionOperator op = build_reconstruction(mesh, 1, 8);
  const ManufacturedProblem p = paraboloid();  // g = x^2 + y^2 on the boundary
  FluxProblem problem = FluxProblem::with_dirichlet(
      mesh, op, [](const Vec2&) { return 1.0; }, p.u, p.grad_u);
  struct ZeroField {
    Vec2 value(int, const Vec2&) const { return Vec2::Zero(); }
    double divergence(int, const Vec2&) const { return 0.0; }
  };
  const double h = mesh.h_max;
  // volume: int 1^2 = 1; boundary: sum of int (grad g x n)^2 = 4 * 4/3
  const double expected = 1.0 + (16.0 / 3.0) / h;
  CHECK(flux_functional_value(problem, ZeroField{}, 0) ==
        doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("fitted tangential trace matches the analytic gradient") {
  const Mesh mesh = build_structured_triangle_mesh(3);
  const ReconstructionOperator op = build_reconstruction(mesh, 2);
  const ManufacturedProblem p = example1();
  // one problem with the analytic gradient, one that must fit the trace
  const FluxProblem with_grad = FluxProblem::from_manufactured(mesh, op, p);
  const FluxProblem fitted = FluxProblem::with_dirichlet(mesh, op, p.f, p.u);
  BoundaryTangentialData exact(with_grad, 3);
  BoundaryTangentialData fit(fitted, 3);
  for (int fid = 0; fid < mesh.num_faces(); ++fid) {
    const Face& face = mesh.faces[static_cast<std::size_t>(fid)];
    if (!face.boundary) continue;
    const QuadratureRule rule = face_quadrature(mesh, fid, 4, 0);
    for (int q = 0; q < rule.size(); ++q) {
      const Vec2& x = rule.points[static_cast<std::size_t>(q)];
      CHECK(fit.cross_at(fid, x) == doctest::Approx(exact.cross_at(fid, x)).epsilon(2e-4));
    }
  }
}

TEST_CASE("Neumann boundary variant reproduces the exact flux") {
  const Mesh mesh = build_structured_triangle_mesh(4);
  const ManufacturedProblem p = paraboloid();
  const ReconstructionOperator op = build_reconstruction(mesh, 1);
  // g_N = grad u . n; evaluated per boundary face via the mesh normals
  const FluxProblem problem = FluxProblem::with_neumann(
      mesh, op, p.f, [&mesh, &p](const Vec2& x) {
        // boundary of the unit square: identify the outward normal from x
        Vec2 n = Vec2::Zero();
        if (x.x() < 1e-12) n = {-1, 0};
        else if (x.x() > 1 - 1e-12) n = {1, 0};
        else if (x.y() < 1e-12) n = {0, -1};
        else n = {0, 1};
        return p.grad_u(x).dot(n);
      });
  SolverOptions options;
  options.tol = 1e-13;
  const FluxSolution sol = solve_flux(problem, options);
  const ErrorNorms err = flux_errors(mesh, p, sol, 1, PenaltyMode::GlobalH, 0);
  CHECK(err.l2 <= 1e-7);
  CHECK(sol.functional_value <= 1e-12);
}
