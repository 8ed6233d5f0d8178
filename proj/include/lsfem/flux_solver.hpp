#pragma once

#include "lsfem/linalg.hpp"
#include "lsfem/norms.hpp"
#include "lsfem/reconstruction.hpp"

#include <functional>

namespace lsfem {

enum class BoundaryKind { Dirichlet, Neumann };

/// Data of the flux minimization: minimize over the reconstructed space
///   J(q) = sum_K ||div q + f||^2 + sum_int 1/h ||[q (x) n]||^2
///        + sum_bnd 1/h ||q x n - grad g x n||^2            (Dirichlet)
/// with the boundary term 1/h ||q . n - g_N||^2 for Neumann data.
struct FluxProblem {
  const Mesh* mesh = nullptr;
  const ReconstructionOperator* reconstruction = nullptr;
  std::function<double(const Vec2&)> source;
  BoundaryKind boundary_kind = BoundaryKind::Dirichlet;
  std::function<double(const Vec2&)> dirichlet;            // g
  std::function<Vec2(const Vec2&)> dirichlet_gradient;     // optional; fitted if absent
  std::function<double(const Vec2&)> neumann;              // g_N
  PenaltyMode penalty = PenaltyMode::GlobalH;

  static FluxProblem with_dirichlet(const Mesh& mesh, const ReconstructionOperator& op,
                                    std::function<double(const Vec2&)> f,
                                    std::function<double(const Vec2&)> g,
                                    std::function<Vec2(const Vec2&)> grad_g = nullptr);
  static FluxProblem with_neumann(const Mesh& mesh, const ReconstructionOperator& op,
                                  std::function<double(const Vec2&)> f,
                                  std::function<double(const Vec2&)> g_n);
  static FluxProblem from_manufactured(const Mesh& mesh, const ReconstructionOperator& op,
                                       const ManufacturedProblem& problem);
};

struct FluxSystem {
  SparseSymmetricMatrix matrix;
  Eigen::VectorXd rhs;
};

/// Assembles the Euler-Lagrange system of the functional; unknowns are the
/// two flux components at each sampling node, dof ids (2K, 2K + 1).
FluxSystem assemble_flux_system(const FluxProblem& problem);

struct FluxSolution {
  Eigen::VectorXd samples;    // per element (x, y) at the sampling node
  ReconstructedField field;
  double functional_value = 0.0;
  int iterations = 0;
  double residual = 0.0;

  Vec2 value(int element, const Vec2& x) const { return field.value(element, x); }
  double divergence(int element, const Vec2& x) const { return field.divergence(element, x); }
};

struct SolverOptions {
  double tol = 1e-10;
  int max_iter = -1;
  bool use_dense = false;  // small-system / oracle path
};

FluxSolution solve_flux(const FluxProblem& problem, const SolverOptions& options = {});

/// Evaluates the functional at an arbitrary per-element field.
/// VecField: value(elem, x) -> Vec2, divergence(elem, x) -> double.
template <class VecField>
double flux_functional_value(const FluxProblem& problem, const VecField& q, int subref = 1);

/// Tangential derivative data (grad g) x n on a boundary face at a given
/// point; falls back to a 1D polynomial fit of the trace when the problem
/// carries no analytic gradient. fit_degree is the polynomial degree of
/// the fallback fit.
class BoundaryTangentialData {
 public:
  BoundaryTangentialData(const FluxProblem& problem, int fit_degree);
  /// t must lie on the face; the face id selects the fitted trace.
  double cross_at(int face, const Vec2& x) const;

 private:
  const FluxProblem* problem_;
  int fit_degree_;
  mutable std::vector<char> fitted_;
  mutable std::vector<Eigen::VectorXd> fits_;  // per face, coefficients in arclength param
  void fit_face(int face) const;
};

// --- implementation of the functional template ---

template <class VecField>
double flux_functional_value(const FluxProblem& problem, const VecField& q, int subref) {
  const Mesh& mesh = *problem.mesh;
  const int m = problem.reconstruction->degree;
  const int qdeg = 2 * m + 6;
  BoundaryTangentialData tangential(problem, m + 1);

  double total = detail::ordered_parallel_sum(mesh.num_elements(), [&](int k) {
    const QuadratureRule rule = element_quadrature(mesh, k, qdeg, subref);
    double acc = 0.0;
    for (int i = 0; i < rule.size(); ++i) {
      const Vec2& x = rule.points[static_cast<std::size_t>(i)];
      const double r = q.divergence(k, x) + problem.source(x);
      acc += rule.weights[static_cast<std::size_t>(i)] * r * r;
    }
    return acc;
  });

  for (int fid = 0; fid < mesh.num_faces(); ++fid) {
    const Face& face = mesh.faces[static_cast<std::size_t>(fid)];
    const QuadratureRule rule = face_quadrature(mesh, fid, qdeg, subref);
    const double weight = penalty_weight(mesh, face, problem.penalty);
    double term = 0.0;
    if (!face.boundary) {
      for (int i = 0; i < rule.size(); ++i) {
        const Vec2& x = rule.points[static_cast<std::size_t>(i)];
        const Vec2 jump = q.value(face.elements[1], x) - q.value(face.elements[0], x);
        term += rule.weights[static_cast<std::size_t>(i)] * jump.squaredNorm();
      }
    } else if (problem.boundary_kind == BoundaryKind::Dirichlet) {
      for (int i = 0; i < rule.size(); ++i) {
        const Vec2& x = rule.points[static_cast<std::size_t>(i)];
        const Vec2 v = q.value(face.elements[0], x);
        const double cross = v.x() * face.normal.y() - v.y() * face.normal.x();
        const double r = cross - tangential.cross_at(fid, x);
        term += rule.weights[static_cast<std::size_t>(i)] * r * r;
      }
    } else {
      for (int i = 0; i < rule.size(); ++i) {
        const Vec2& x = rule.points[static_cast<std::size_t>(i)];
        const double r = q.value(face.elements[0], x).dot(face.normal) - problem.neumann(x);
        term += rule.weights[static_cast<std::size_t>(i)] * r * r;
      }
    }
    total += weight * term;
  }
  return total;
}

}  // namespace lsfem
