#include "lsfem/quadrature.hpp"

#include <cmath>
#include <numbers>

namespace lsfem {

QuadratureRule gauss_legendre_unit(int n_points) {
  require(n_points >= 1, "gauss_legendre_unit: need at least one point");
  QuadratureRule rule;
  rule.exactness_degree = 2 * n_points - 1;
  rule.points.resize(static_cast<std::size_t>(n_points));
  rule.weights.resize(static_cast<std::size_t>(n_points));

  const int n = n_points;
  for (int i = 0; i < (n + 1) / 2; ++i) {
    // Newton on P_n with Chebyshev initial guess
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.points[static_cast<std::size_t>(i)] = {0.5 * (1.0 - x), 0.0};
    rule.points[static_cast<std::size_t>(n - 1 - i)] = {0.5 * (1.0 + x), 0.0};
    rule.weights[static_cast<std::size_t>(i)] = 0.5 * w;
    rule.weights[static_cast<std::size_t>(n - 1 - i)] = 0.5 * w;
  }
  return rule;
}

QuadratureRule edge_quadrature(int exactness_degree) {
  require(exactness_degree >= 0, "edge_quadrature: negative degree");
  QuadratureRule rule = gauss_legendre_unit(exactness_degree / 2 + 1);
  rule.exactness_degree = exactness_degree;
  return rule;
}

QuadratureRule triangle_quadrature(int exactness_degree) {
  require(exactness_degree >= 0 && exactness_degree <= 20,
          "triangle_quadrature: unsupported degree (supported range 0..20)");
  const int q = exactness_degree;
  // Duffy map (u, v) -> (u, v(1-u)) has Jacobian (1-u): monomial x^a y^b
  // pulls back with u-degree a+b+1 and v-degree b.
  const QuadratureRule gu = gauss_legendre_unit((q + 1) / 2 + 1);
  const QuadratureRule gv = gauss_legendre_unit(q / 2 + 1);
  QuadratureRule rule;
  rule.exactness_degree = q;
  rule.points.reserve(static_cast<std::size_t>(gu.size() * gv.size()));
  rule.weights.reserve(static_cast<std::size_t>(gu.size() * gv.size()));
  for (int i = 0; i < gu.size(); ++i) {
    const double u = gu.points[static_cast<std::size_t>(i)].x();
    for (int j = 0; j < gv.size(); ++j) {
      const double v = gv.points[static_cast<std::size_t>(j)].x();
      rule.points.push_back({u, v * (1.0 - u)});
      rule.weights.push_back(gu.weights[static_cast<std::size_t>(i)] *
                             gv.weights[static_cast<std::size_t>(j)] * (1.0 - u));
    }
  }
  return rule;
}

QuadratureRule map_to_triangle(const QuadratureRule& ref, const Vec2& a, const Vec2& b,
                               const Vec2& c) {
  const Vec2 e1 = b - a;
  const Vec2 e2 = c - a;
  const double det = e1.x() * e2.y() - e1.y() * e2.x();
  QuadratureRule rule;
  rule.exactness_degree = ref.exactness_degree;
  rule.points.reserve(ref.points.size());
  rule.weights.reserve(ref.weights.size());
  for (std::size_t i = 0; i < ref.points.size(); ++i) {
    rule.points.push_back(a + ref.points[i].x() * e1 + ref.points[i].y() * e2);
    rule.weights.push_back(ref.weights[i] * std::abs(det));
  }
  return rule;
}

QuadratureRule map_to_segment(const QuadratureRule& ref, const Vec2& a, const Vec2& b) {
  const double len = (b - a).norm();
  QuadratureRule rule;
  rule.exactness_degree = ref.exactness_degree;
  rule.points.reserve(ref.points.size());
  rule.weights.reserve(ref.weights.size());
  for (std::size_t i = 0; i < ref.points.size(); ++i) {
    rule.points.push_back(a + ref.points[i].x() * (b - a));
    rule.weights.push_back(ref.weights[i] * len);
  }
  return rule;
}

QuadratureRule polygon_quadrature(const std::vector<Vec2>& vertices, int exactness_degree) {
  require(vertices.size() >= 3, "polygon_quadrature: need at least 3 vertices");
  // area centroid via fan from the first vertex
  double area2 = 0.0;
  Vec2 weighted = Vec2::Zero();
  for (std::size_t i = 1; i + 1 < vertices.size(); ++i) {
    const Vec2 d1 = vertices[i] - vertices[0];
    const Vec2 d2 = vertices[i + 1] - vertices[0];
    const double det = d1.x() * d2.y() - d1.y() * d2.x();
    area2 += det;
    weighted += det * (vertices[0] + vertices[i] + vertices[i + 1]) / 3.0;
  }
  require(std::abs(area2) > 0.0, "polygon_quadrature: degenerate polygon");
  const Vec2 centroid = weighted / area2;

  const QuadratureRule ref = triangle_quadrature(exactness_degree);
  QuadratureRule rule;
  rule.exactness_degree = exactness_degree;
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    const Vec2& a = vertices[i];
    const Vec2& b = vertices[(i + 1) % vertices.size()];
    const QuadratureRule tri = map_to_triangle(ref, centroid, a, b);
    rule.points.insert(rule.points.end(), tri.points.begin(), tri.points.end());
    rule.weights.insert(rule.weights.end(), tri.weights.begin(), tri.weights.end());
  }
  return rule;
}

namespace {

void append_subdivided(const QuadratureRule& ref, const Vec2& a, const Vec2& b, const Vec2& c,
                       int levels, QuadratureRule& out) {
  if (levels == 0) {
    const QuadratureRule tri = map_to_triangle(ref, a, b, c);
    out.points.insert(out.points.end(), tri.points.begin(), tri.points.end());
    out.weights.insert(out.weights.end(), tri.weights.begin(), tri.weights.end());
    return;
  }
  const Vec2 ab = 0.5 * (a + b), bc = 0.5 * (b + c), ca = 0.5 * (c + a);
  append_subdivided(ref, a, ab, ca, levels - 1, out);
  append_subdivided(ref, ab, b, bc, levels - 1, out);
  append_subdivided(ref, ca, bc, c, levels - 1, out);
  append_subdivided(ref, ab, bc, ca, levels - 1, out);
}

}  // namespace

QuadratureRule subdivided_triangle_quadrature(const Vec2& a, const Vec2& b, const Vec2& c,
                                              int exactness_degree, int levels) {
  const QuadratureRule ref = triangle_quadrature(exactness_degree);
  QuadratureRule rule;
  rule.exactness_degree = exactness_degree;
  append_subdivided(ref, a, b, c, levels, rule);
  return rule;
}

QuadratureRule subdivided_segment_quadrature(const Vec2& a, const Vec2& b, int exactness_degree,
                                             int levels) {
  const QuadratureRule ref = edge_quadrature(exactness_degree);
  const int pieces = 1 << levels;
  QuadratureRule rule;
  rule.exactness_degree = exactness_degree;
  for (int p = 0; p < pieces; ++p) {
    const Vec2 pa = a + (static_cast<double>(p) / pieces) * (b - a);
    const Vec2 pb = a + (static_cast<double>(p + 1) / pieces) * (b - a);
    const QuadratureRule seg = map_to_segment(ref, pa, pb);
    rule.points.insert(rule.points.end(), seg.points.begin(), seg.points.end());
    rule.weights.insert(rule.weights.end(), seg.weights.begin(), seg.weights.end());
  }
  return rule;
}

}  // namespace lsfem
