#include "lsfem/norms.hpp"

#include <cmath>
#include <limits>

namespace lsfem {

QuadratureRule element_quadrature(const Mesh& mesh, int element, int exactness_degree,
                                  int subrefine_levels) {
  const auto verts = mesh.element_vertices(element);
  if (verts.size() == 3)
    return subdivided_triangle_quadrature(verts[0], verts[1], verts[2], exactness_degree,
                                          subrefine_levels);
  const Vec2 c = polygon_barycenter(verts);
  QuadratureRule rule;
  rule.exactness_degree = exactness_degree;
  for (std::size_t i = 0; i < verts.size(); ++i) {
    const QuadratureRule tri =
        subdivided_triangle_quadrature(c, verts[i], verts[(i + 1) % verts.size()],
                                       exactness_degree, subrefine_levels);
    rule.points.insert(rule.points.end(), tri.points.begin(), tri.points.end());
    rule.weights.insert(rule.weights.end(), tri.weights.begin(), tri.weights.end());
  }
  return rule;
}

QuadratureRule face_quadrature(const Mesh& mesh, int face, int exactness_degree,
                               int subrefine_levels) {
  const Face& f = mesh.faces[static_cast<std::size_t>(face)];
  const Vec2 a = mesh.nodes[static_cast<std::size_t>(f.vertices[0])];
  const Vec2 b = mesh.nodes[static_cast<std::size_t>(f.vertices[1])];
  return subdivided_segment_quadrature(a, b, exactness_degree, subrefine_levels);
}

std::vector<double> convergence_order(const std::vector<double>& errors,
                                      const std::vector<double>& hs) {
  require(errors.size() == hs.size(), "convergence_order: length mismatch");
  require(errors.size() >= 2, "convergence_order: need at least 2 levels");
  std::vector<double> orders;
  orders.reserve(errors.size() - 1);
  for (std::size_t i = 1; i < errors.size(); ++i) {
    require(hs[i] > 0.0 && hs[i - 1] > 0.0, "convergence_order: h must be positive");
    require(errors[i] >= 0.0 && errors[i - 1] >= 0.0,
            "convergence_order: errors must be nonnegative");
    if (errors[i] == 0.0 || errors[i - 1] == 0.0) {
      orders.push_back(std::numeric_limits<double>::quiet_NaN());
      continue;
    }
    orders.push_back(std::log(errors[i - 1] / errors[i]) / std::log(hs[i - 1] / hs[i]));
  }
  return orders;
}

}  // namespace lsfem
