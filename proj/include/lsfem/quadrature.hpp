#pragma once

#include "lsfem/common.hpp"

#include <vector>

namespace lsfem {

/// Quadrature rule. Triangle/polygon rules store 2D points; edge rules store
/// the parameter in the x coordinate (reference interval [0, 1]).
struct QuadratureRule {
  std::vector<Vec2> points;
  std::vector<double> weights;
  int exactness_degree = 0;

  int size() const { return static_cast<int>(points.size()); }
};

/// Gauss-Legendre nodes/weights on [0, 1]; exact for degree 2n - 1.
QuadratureRule gauss_legendre_unit(int n_points);

/// Rule on the reference interval [0, 1] exact to the given degree.
QuadratureRule edge_quadrature(int exactness_degree);

/// Rule on the reference triangle (0,0),(1,0),(0,1), exact to the given
/// degree (<= 20), built as a collapsed tensor Gauss product.
QuadratureRule triangle_quadrature(int exactness_degree);

/// Maps a reference-triangle rule to the physical triangle (a, b, c).
QuadratureRule map_to_triangle(const QuadratureRule& ref, const Vec2& a, const Vec2& b,
                               const Vec2& c);

/// Maps a reference-edge rule to the physical segment [a, b].
QuadratureRule map_to_segment(const QuadratureRule& ref, const Vec2& a, const Vec2& b);

/// Physical rule over a polygon via centroid-fan sub-triangulation.
QuadratureRule polygon_quadrature(const std::vector<Vec2>& vertices, int exactness_degree);

/// Physical rule over a triangle with `levels` uniform refinements of the
/// triangle (4^levels sub-triangles); used for error integration against
/// non-polynomial exact solutions.
QuadratureRule subdivided_triangle_quadrature(const Vec2& a, const Vec2& b, const Vec2& c,
                                              int exactness_degree, int levels);

/// Physical rule over the segment [a, b] split into 2^levels pieces.
QuadratureRule subdivided_segment_quadrature(const Vec2& a, const Vec2& b,
                                             int exactness_degree, int levels);

}  // namespace lsfem
