#pragma once

#include "lsfem/common.hpp"

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

namespace lsfem {

/// Mesh face (an edge in 2D). The stored normal points outward from the
/// first incident element, which is always the lower-id side.
struct Face {
  std::array<int, 2> vertices{-1, -1};
  double length = 0.0;
  Vec2 normal = Vec2::Zero();
  std::array<int, 2> elements{-1, -1};  // second entry -1 on the boundary
  bool boundary = false;
};

enum class Domain { UnitSquare, LShape };

/// Polygonal partition of a 2D domain with face topology.
struct Mesh {
  std::vector<Vec2> nodes;
  std::vector<std::vector<int>> elements;  // counterclockwise vertex cycles
  std::vector<Face> faces;
  std::vector<std::vector<int>> element_faces;      // per element, cyclic order
  std::vector<std::vector<int>> element_neighbors;  // face-adjacent, ascending
  std::vector<double> element_diameters;            // h_K = max vertex distance
  double h_max = 0.0;

  int num_elements() const { return static_cast<int>(elements.size()); }
  int num_nodes() const { return static_cast<int>(nodes.size()); }
  int num_faces() const { return static_cast<int>(faces.size()); }
  bool all_triangles() const;
  std::vector<Vec2> element_vertices(int k) const;
  double element_area(int k) const;
};

/// Structured triangulation: each grid cell of the unit square is split
/// along the bottom-left to top-right diagonal. The L-shape variant maps
/// the square to [-1,1]^2 and drops the quadrant [0,1)x(-1,0]; n must be
/// even there so the re-entrant corner is a mesh node.
Mesh build_structured_triangle_mesh(int n, Domain domain = Domain::UnitSquare);

/// Reads the line-oriented text format ('#' starts a comment):
///   nodes <N>
///   <x> <y>                 (N lines)
///   elements <M>
///   <k> <v0> ... <v(k-1)>   (M lines)
/// Boundary faces are inferred from topology, not read.
Mesh read_mesh(std::istream& in);
Mesh read_mesh_file(const std::string& path);
void write_mesh(const Mesh& mesh, std::ostream& out);

/// Builds faces, adjacency and geometric quantities from nodes + elements.
/// Throws on non-manifold edges (> 2 incident elements) and degenerate
/// (zero-area) elements; reorients clockwise polygons.
void compute_topology(Mesh& mesh);

/// Area-weighted centroid (fan sub-triangulation from the first vertex).
Vec2 barycenter(const Mesh& mesh, int element);
Vec2 polygon_barycenter(const std::vector<Vec2>& vertices);

/// Outward unit normal of a face as seen from the given incident element.
Vec2 outward_normal(const Mesh& mesh, int face, int element);

bool point_in_element(const Mesh& mesh, int element, const Vec2& p);
int locate_element(const Mesh& mesh, const Vec2& p);

/// Empirical shape-regularity diagnostics; never rejects a mesh.
struct ShapeRegularityReport {
  double min_face_to_diameter = 0.0;  // min over (K, e) of h_e / h_K
  double min_subtriangle_angle = 0.0; // radians, over the centroid-fan split
};
ShapeRegularityReport shape_regularity_report(const Mesh& mesh);

}  // namespace lsfem
