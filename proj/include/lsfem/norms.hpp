#pragma once

#include "lsfem/problems.hpp"
#include "lsfem/quadrature.hpp"

#include <cmath>
#include <numeric>
#include <vector>

namespace lsfem {

enum class PenaltyMode { GlobalH, FaceH };

inline double penalty_weight(const Mesh& mesh, const Face& face, PenaltyMode mode) {
  return 1.0 / (mode == PenaltyMode::GlobalH ? mesh.h_max : face.length);
}

/// Physical quadrature over one element with uniform sub-refinement
/// (non-triangles are fanned from the centroid first).
QuadratureRule element_quadrature(const Mesh& mesh, int element, int exactness_degree,
                                  int subrefine_levels = 0);

/// Physical quadrature over one face with segment sub-refinement.
QuadratureRule face_quadrature(const Mesh& mesh, int face, int exactness_degree,
                               int subrefine_levels = 0);

/// order_i = log(e_(i-1) / e_i) / log(h_(i-1) / h_i); NaN where undefined
/// (zero error).
std::vector<double> convergence_order(const std::vector<double>& errors,
                                      const std::vector<double>& hs);

struct ErrorNorms {
  double l2 = 0.0;
  double energy = 0.0;
};

/// Sub-refinement depth used when integrating against non-polynomial exact
/// solutions; keeps the norm-evaluation error below discretization error.
inline constexpr int kErrorSubrefLevels = 3;

namespace detail {

template <class Fn>
double ordered_parallel_sum(int n, Fn&& fn) {
  std::vector<double> partials(static_cast<std::size_t>(n), 0.0);
  parallel_for(n, [&](int k) { partials[static_cast<std::size_t>(k)] = fn(k); });
  return std::accumulate(partials.begin(), partials.end(), 0.0);
}

}  // namespace detail

/// Flux error in L2 and in the energy norm
///   ||| e |||_p^2 = sum_K ||div e||^2 + sum_int 1/h ||[e x n]||^2
///                 + sum_bnd 1/h ||e x n||^2,
/// where e = grad u - q_h and div e = -f - div q_h.
/// VecField: value(elem, x) -> Vec2, divergence(elem, x) -> double.
template <class VecField>
ErrorNorms flux_errors(const Mesh& mesh, const ManufacturedProblem& problem, const VecField& q_h,
                       int degree_m, PenaltyMode mode = PenaltyMode::GlobalH,
                       int subref = kErrorSubrefLevels) {
  const int qdeg = 2 * degree_m + 6;
  ErrorNorms out;

  struct Pair {
    double l2, div;
  };
  std::vector<Pair> volume(static_cast<std::size_t>(mesh.num_elements()));
  parallel_for(mesh.num_elements(), [&](int k) {
    const QuadratureRule rule = element_quadrature(mesh, k, qdeg, subref);
    double l2 = 0.0, dv = 0.0;
    for (int q = 0; q < rule.size(); ++q) {
      const Vec2& x = rule.points[static_cast<std::size_t>(q)];
      const double w = rule.weights[static_cast<std::size_t>(q)];
      const Vec2 e = problem.grad_u(x) - q_h.value(k, x);
      const double ediv = -problem.f(x) - q_h.divergence(k, x);
      l2 += w * e.squaredNorm();
      dv += w * ediv * ediv;
    }
    volume[static_cast<std::size_t>(k)] = {l2, dv};
  });
  double energy2 = 0.0;
  for (const Pair& p : volume) {
    out.l2 += p.l2;
    energy2 += p.div;
  }

  for (int fid = 0; fid < mesh.num_faces(); ++fid) {
    const Face& face = mesh.faces[static_cast<std::size_t>(fid)];
    const QuadratureRule rule = face_quadrature(mesh, fid, qdeg, subref);
    const double weight = penalty_weight(mesh, face, mode);
    double term = 0.0;
    if (face.boundary) {
      for (int q = 0; q < rule.size(); ++q) {
        const Vec2& x = rule.points[static_cast<std::size_t>(q)];
        const Vec2 e = problem.grad_u(x) - q_h.value(face.elements[0], x);
        const double cross = e.x() * face.normal.y() - e.y() * face.normal.x();
        term += rule.weights[static_cast<std::size_t>(q)] * cross * cross;
      }
    } else {
      for (int q = 0; q < rule.size(); ++q) {
        const Vec2& x = rule.points[static_cast<std::size_t>(q)];
        // [e (x) n] has Frobenius norm |e+ - e-|
        const Vec2 jump = q_h.value(face.elements[1], x) - q_h.value(face.elements[0], x);
        term += rule.weights[static_cast<std::size_t>(q)] * jump.squaredNorm();
      }
    }
    energy2 += weight * term;
  }

  out.l2 = std::sqrt(out.l2);
  out.energy = std::sqrt(energy2);
  return out;
}

/// Pressure error in L2 and in the energy norm
///   ||| e |||_u^2 = sum_K ||grad e||^2 + sum_bnd 1/h ||e||^2.
/// ScalField: value(elem, x) -> double, gradient(elem, x) -> Vec2.
template <class ScalField>
ErrorNorms pressure_errors(const Mesh& mesh, const ManufacturedProblem& problem,
                           const ScalField& u_h, int degree_mu,
                           PenaltyMode mode = PenaltyMode::GlobalH,
                           int subref = kErrorSubrefLevels) {
  const int qdeg = 2 * degree_mu + 6;
  ErrorNorms out;

  struct Pair {
    double l2, grad;
  };
  std::vector<Pair> volume(static_cast<std::size_t>(mesh.num_elements()));
  parallel_for(mesh.num_elements(), [&](int k) {
    const QuadratureRule rule = element_quadrature(mesh, k, qdeg, subref);
    double l2 = 0.0, gr = 0.0;
    for (int q = 0; q < rule.size(); ++q) {
      const Vec2& x = rule.points[static_cast<std::size_t>(q)];
      const double w = rule.weights[static_cast<std::size_t>(q)];
      const double e = problem.u(x) - u_h.value(k, x);
      const Vec2 eg = problem.grad_u(x) - u_h.gradient(k, x);
      l2 += w * e * e;
      gr += w * eg.squaredNorm();
    }
    volume[static_cast<std::size_t>(k)] = {l2, gr};
  });
  double energy2 = 0.0;
  for (const Pair& p : volume) {
    out.l2 += p.l2;
    energy2 += p.grad;
  }

  for (int fid = 0; fid < mesh.num_faces(); ++fid) {
    const Face& face = mesh.faces[static_cast<std::size_t>(fid)];
    if (!face.boundary) continue;
    const QuadratureRule rule = face_quadrature(mesh, fid, qdeg, subref);
    double term = 0.0;
    for (int q = 0; q < rule.size(); ++q) {
      const Vec2& x = rule.points[static_cast<std::size_t>(q)];
      const double e = problem.u(x) - u_h.value(face.elements[0], x);
      term += rule.weights[static_cast<std::size_t>(q)] * e * e;
    }
    energy2 += penalty_weight(mesh, face, mode) * term;
  }

  out.l2 = std::sqrt(out.l2);
  out.energy = std::sqrt(energy2);
  return out;
}

/// DLS flux norm of the error,
///   ||e||_p^2 = sum_K (||div e||^2 + ||e||^2) + sum_int 1/h ||[e . n]||^2,
/// the norm the efficiency comparison is measured in.
template <class VecField>
double dls_flux_error_norm(const Mesh& mesh, const ManufacturedProblem& problem,
                           const VecField& q_h, int degree_m,
                           int subref = kErrorSubrefLevels) {
  const int qdeg = 2 * degree_m + 6;
  double total = detail::ordered_parallel_sum(mesh.num_elements(), [&](int k) {
    const QuadratureRule rule = element_quadrature(mesh, k, qdeg, subref);
    double acc = 0.0;
    for (int q = 0; q < rule.size(); ++q) {
      const Vec2& x = rule.points[static_cast<std::size_t>(q)];
      const double w = rule.weights[static_cast<std::size_t>(q)];
      const Vec2 e = problem.grad_u(x) - q_h.value(k, x);
      const double ediv = -problem.f(x) - q_h.divergence(k, x);
      acc += w * (e.squaredNorm() + ediv * ediv);
    }
    return acc;
  });
  for (int fid = 0; fid < mesh.num_faces(); ++fid) {
    const Face& face = mesh.faces[static_cast<std::size_t>(fid)];
    if (face.boundary) continue;
    const QuadratureRule rule = face_quadrature(mesh, fid, qdeg, subref);
    double term = 0.0;
    for (int q = 0; q < rule.size(); ++q) {
      const Vec2& x = rule.points[static_cast<std::size_t>(q)];
      const Vec2 jump = q_h.value(face.elements[1], x) - q_h.value(face.elements[0], x);
      const double njump = jump.dot(face.normal);
      term += rule.weights[static_cast<std::size_t>(q)] * njump * njump;
    }
    total += term / mesh.h_max;
  }
  return std::sqrt(total);
}

/// DLS pressure norm of the error,
///   ||e||_u^2 = sum_K ||grad e||^2 + sum_all faces 1/h ||[e]||^2
/// (boundary faces contribute 1/h ||e||^2).
template <class ScalField>
double dls_pressure_error_norm(const Mesh& mesh, const ManufacturedProblem& problem,
                               const ScalField& u_h, int degree_m,
                               int subref = kErrorSubrefLevels) {
  const int qdeg = 2 * degree_m + 6;
  double total = detail::ordered_parallel_sum(mesh.num_elements(), [&](int k) {
    const QuadratureRule rule = element_quadrature(mesh, k, qdeg, subref);
    double acc = 0.0;
    for (int q = 0; q < rule.size(); ++q) {
      const Vec2& x = rule.points[static_cast<std::size_t>(q)];
      const Vec2 eg = problem.grad_u(x) - u_h.gradient(k, x);
      acc += rule.weights[static_cast<std::size_t>(q)] * eg.squaredNorm();
    }
    return acc;
  });
  for (int fid = 0; fid < mesh.num_faces(); ++fid) {
    const Face& face = mesh.faces[static_cast<std::size_t>(fid)];
    const QuadratureRule rule = face_quadrature(mesh, fid, qdeg, subref);
    double term = 0.0;
    if (face.boundary) {
      for (int q = 0; q < rule.size(); ++q) {
        const Vec2& x = rule.points[static_cast<std::size_t>(q)];
        const double e = problem.u(x) - u_h.value(face.elements[0], x);
        term += rule.weights[static_cast<std::size_t>(q)] * e * e;
      }
    } else {
      for (int q = 0; q < rule.size(); ++q) {
        const Vec2& x = rule.points[static_cast<std::size_t>(q)];
        const double jump = u_h.value(face.elements[0], x) - u_h.value(face.elements[1], x);
        term += rule.weights[static_cast<std::size_t>(q)] * jump * jump;
      }
    }
    total += term / mesh.h_max;
  }
  return std::sqrt(total);
}

}  // namespace lsfem
