#include "lsfem/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>

namespace lsfem {

namespace {

double polygon_signed_area(const std::vector<Vec2>& v) {
  double a2 = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Vec2& p = v[i];
    const Vec2& q = v[(i + 1) % v.size()];
    a2 += p.x() * q.y() - p.y() * q.x();
  }
  return 0.5 * a2;
}

}  // namespace

bool Mesh::all_triangles() const {
  for (const auto& e : elements)
    if (e.size() != 3) return false;
  return true;
}

std::vector<Vec2> Mesh::element_vertices(int k) const {
  std::vector<Vec2> v;
  v.reserve(elements[static_cast<std::size_t>(k)].size());
  for (int id : elements[static_cast<std::size_t>(k)]) v.push_back(nodes[static_cast<std::size_t>(id)]);
  return v;
}

double Mesh::element_area(int k) const { return polygon_signed_area(element_vertices(k)); }

void compute_topology(Mesh& mesh) {
  // orient counterclockwise, reject degenerate elements
  for (std::size_t k = 0; k < mesh.elements.size(); ++k) {
    auto verts = mesh.element_vertices(static_cast<int>(k));
    const double area = polygon_signed_area(verts);
    require(std::abs(area) > 1e-300, "degenerate (zero-area) element " + std::to_string(k));
    if (area < 0.0)
      std::reverse(mesh.elements[k].begin(), mesh.elements[k].end());
  }

  mesh.faces.clear();
  mesh.element_faces.assign(mesh.elements.size(), {});
  std::map<std::pair<int, int>, int> edge_to_face;
  for (int k = 0; k < mesh.num_elements(); ++k) {
    const auto& elem = mesh.elements[static_cast<std::size_t>(k)];
    for (std::size_t i = 0; i < elem.size(); ++i) {
      const int va = elem[i];
      const int vb = elem[(i + 1) % elem.size()];
      const auto key = std::minmax(va, vb);
      auto it = edge_to_face.find(key);
      if (it == edge_to_face.end()) {
        Face f;
        f.vertices = {va, vb};
        const Vec2 a = mesh.nodes[static_cast<std::size_t>(va)];
        const Vec2 b = mesh.nodes[static_cast<std::size_t>(vb)];
        f.length = (b - a).norm();
        require(f.length > 0.0, "zero-length face in element " + std::to_string(k));
        // right-hand perpendicular of the CCW traversal points outward
        f.normal = Vec2((b - a).y(), -(b - a).x()) / f.length;
        f.elements = {k, -1};
        f.boundary = true;
        const int id = mesh.num_faces();
        mesh.faces.push_back(f);
        edge_to_face.emplace(key, id);
        mesh.element_faces[static_cast<std::size_t>(k)].push_back(id);
      } else {
        Face& f = mesh.faces[static_cast<std::size_t>(it->second)];
        require(f.elements[1] == -1, "non-manifold edge (" + std::to_string(key.first) + "," +
                                         std::to_string(key.second) + ") shared by > 2 elements");
        f.elements[1] = k;
        f.boundary = false;
        mesh.element_faces[static_cast<std::size_t>(k)].push_back(it->second);
      }
    }
  }

  mesh.element_neighbors.assign(mesh.elements.size(), {});
  for (const Face& f : mesh.faces) {
    if (f.boundary) continue;
    mesh.element_neighbors[static_cast<std::size_t>(f.elements[0])].push_back(f.elements[1]);
    mesh.element_neighbors[static_cast<std::size_t>(f.elements[1])].push_back(f.elements[0]);
  }
  for (auto& nbrs : mesh.element_neighbors) std::sort(nbrs.begin(), nbrs.end());

  mesh.element_diameters.assign(mesh.elements.size(), 0.0);
  mesh.h_max = 0.0;
  for (int k = 0; k < mesh.num_elements(); ++k) {
    const auto verts = mesh.element_vertices(k);
    double d = 0.0;
    for (std::size_t i = 0; i < verts.size(); ++i)
      for (std::size_t j = i + 1; j < verts.size(); ++j)
        d = std::max(d, (verts[i] - verts[j]).norm());
    mesh.element_diameters[static_cast<std::size_t>(k)] = d;
    mesh.h_max = std::max(mesh.h_max, d);
  }
}

Mesh build_structured_triangle_mesh(int n, Domain domain) {
  require(n >= 1, "build_structured_triangle_mesh: n must be >= 1");
  if (domain == Domain::LShape)
    require(n % 2 == 0, "build_structured_triangle_mesh: L-shape requires even n");

  Mesh mesh;
  mesh.nodes.reserve(static_cast<std::size_t>((n + 1) * (n + 1)));
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i)
      mesh.nodes.push_back({static_cast<double>(i) / n, static_cast<double>(j) / n});
  auto node_id = [n](int i, int j) { return j * (n + 1) + i; };

  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const int a = node_id(i, j), b = node_id(i + 1, j);
      const int c = node_id(i + 1, j + 1), d = node_id(i, j + 1);
      mesh.elements.push_back({a, b, c});
      mesh.elements.push_back({a, c, d});
    }

  if (domain == Domain::LShape) {
    for (Vec2& p : mesh.nodes) p = 2.0 * p - Vec2(1.0, 1.0);
    std::vector<std::vector<int>> kept;
    for (const auto& elem : mesh.elements) {
      Vec2 bc = Vec2::Zero();
      for (int v : elem) bc += mesh.nodes[static_cast<std::size_t>(v)];
      bc /= static_cast<double>(elem.size());
      if (bc.x() > 0.0 && bc.y() < 0.0) continue;
      kept.push_back(elem);
    }
    mesh.elements = std::move(kept);
    // drop orphaned nodes, renumbering densely
    std::vector<int> remap(mesh.nodes.size(), -1);
    std::vector<Vec2> nodes;
    for (auto& elem : mesh.elements)
      for (int& v : elem) {
        if (remap[static_cast<std::size_t>(v)] < 0) {
          remap[static_cast<std::size_t>(v)] = static_cast<int>(nodes.size());
          nodes.push_back(mesh.nodes[static_cast<std::size_t>(v)]);
        }
        v = remap[static_cast<std::size_t>(v)];
      }
    mesh.nodes = std::move(nodes);
  }

  compute_topology(mesh);
  return mesh;
}

Mesh read_mesh(std::istream& in) {
  Mesh mesh;
  int line_no = 0;
  auto next_tokens = [&](std::vector<std::string>& out) -> bool {
    std::string line;
    while (std::getline(in, line)) {
      ++line_no;
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      std::istringstream ss(line);
      out.clear();
      std::string tok;
      while (ss >> tok) out.push_back(tok);
      if (!out.empty()) return true;
    }
    return false;
  };
  auto fail = [&](const std::string& msg) -> Error {
    return Error("mesh parse error at line " + std::to_string(line_no) + ": " + msg);
  };

  std::vector<std::string> tok;
  if (!next_tokens(tok) || tok.size() != 2 || tok[0] != "nodes") throw fail("expected 'nodes <N>'");
  int n_nodes = 0;
  try {
    n_nodes = std::stoi(tok[1]);
  } catch (...) {
    throw fail("bad node count '" + tok[1] + "'");
  }
  require(n_nodes >= 0, "negative node count");
  mesh.nodes.reserve(static_cast<std::size_t>(n_nodes));
  for (int i = 0; i < n_nodes; ++i) {
    if (!next_tokens(tok) || tok.size() != 2) throw fail("expected '<x> <y>'");
    try {
      mesh.nodes.push_back({std::stod(tok[0]), std::stod(tok[1])});
    } catch (...) {
      throw fail("bad coordinate");
    }
  }

  if (!next_tokens(tok) || tok.size() != 2 || tok[0] != "elements")
    throw fail("expected 'elements <M>'");
  int n_elements = 0;
  try {
    n_elements = std::stoi(tok[1]);
  } catch (...) {
    throw fail("bad element count '" + tok[1] + "'");
  }
  for (int m = 0; m < n_elements; ++m) {
    if (!next_tokens(tok) || tok.empty()) throw fail("expected element line");
    int k = 0;
    try {
      k = std::stoi(tok[0]);
    } catch (...) {
      throw fail("bad vertex count");
    }
    if (k < 3 || static_cast<int>(tok.size()) != k + 1)
      throw fail("element line must list k >= 3 vertex ids");
    std::vector<int> elem(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) {
      try {
        elem[static_cast<std::size_t>(i)] = std::stoi(tok[static_cast<std::size_t>(i + 1)]);
      } catch (...) {
        throw fail("bad vertex id");
      }
      if (elem[static_cast<std::size_t>(i)] < 0 || elem[static_cast<std::size_t>(i)] >= n_nodes)
        throw fail("vertex id out of range");
    }
    mesh.elements.push_back(std::move(elem));
  }

  compute_topology(mesh);
  return mesh;
}

Mesh read_mesh_file(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), "cannot open mesh file '" + path + "'");
  return read_mesh(in);
}

void write_mesh(const Mesh& mesh, std::ostream& out) {
  out << "nodes " << mesh.num_nodes() << "\n";
  char buf[80];
  for (const Vec2& p : mesh.nodes) {
    std::snprintf(buf, sizeof buf, "%.17g %.17g\n", p.x(), p.y());
    out << buf;
  }
  out << "elements " << mesh.num_elements() << "\n";
  for (const auto& elem : mesh.elements) {
    out << elem.size();
    for (int v : elem) out << ' ' << v;
    out << "\n";
  }
}

Vec2 polygon_barycenter(const std::vector<Vec2>& v) {
  double area2 = 0.0;
  Vec2 weighted = Vec2::Zero();
  for (std::size_t i = 1; i + 1 < v.size(); ++i) {
    const Vec2 d1 = v[i] - v[0];
    const Vec2 d2 = v[i + 1] - v[0];
    const double det = d1.x() * d2.y() - d1.y() * d2.x();
    area2 += det;
    weighted += det * (v[0] + v[i] + v[i + 1]) / 3.0;
  }
  require(std::abs(area2) > 0.0, "polygon_barycenter: zero-area polygon");
  return weighted / area2;
}

Vec2 barycenter(const Mesh& mesh, int element) {
  return polygon_barycenter(mesh.element_vertices(element));
}

Vec2 outward_normal(const Mesh& mesh, int face, int element) {
  const Face& f = mesh.faces[static_cast<std::size_t>(face)];
  if (f.elements[0] == element) return f.normal;
  require(f.elements[1] == element, "outward_normal: element not incident to face");
  return -f.normal;
}

bool point_in_element(const Mesh& mesh, int element, const Vec2& p) {
  // crossing number; adequate for the simple polygons we handle
  const auto v = mesh.element_vertices(element);
  bool inside = false;
  for (std::size_t i = 0, j = v.size() - 1; i < v.size(); j = i++) {
    const bool cross = (v[i].y() > p.y()) != (v[j].y() > p.y());
    if (cross) {
      const double t = (p.y() - v[i].y()) / (v[j].y() - v[i].y());
      if (p.x() < v[i].x() + t * (v[j].x() - v[i].x())) inside = !inside;
    }
  }
  return inside;
}

int locate_element(const Mesh& mesh, const Vec2& p) {
  for (int k = 0; k < mesh.num_elements(); ++k)
    if (point_in_element(mesh, k, p)) return k;
  return -1;
}

ShapeRegularityReport shape_regularity_report(const Mesh& mesh) {
  ShapeRegularityReport rep;
  rep.min_face_to_diameter = std::numeric_limits<double>::infinity();
  rep.min_subtriangle_angle = std::numeric_limits<double>::infinity();
  auto angle = [](const Vec2& a, const Vec2& b, const Vec2& c) {
    const Vec2 u = b - a, v = c - a;
    return std::acos(std::clamp(u.dot(v) / (u.norm() * v.norm()), -1.0, 1.0));
  };
  for (int k = 0; k < mesh.num_elements(); ++k) {
    const double hk = mesh.element_diameters[static_cast<std::size_t>(k)];
    for (int fid : mesh.element_faces[static_cast<std::size_t>(k)])
      rep.min_face_to_diameter =
          std::min(rep.min_face_to_diameter, mesh.faces[static_cast<std::size_t>(fid)].length / hk);
    const auto verts = mesh.element_vertices(k);
    if (verts.size() == 3) {
      rep.min_subtriangle_angle = std::min({rep.min_subtriangle_angle, angle(verts[0], verts[1], verts[2]),
                                            angle(verts[1], verts[2], verts[0]),
                                            angle(verts[2], verts[0], verts[1])});
    } else {
      const Vec2 c = barycenter(mesh, k);
      for (std::size_t i = 0; i < verts.size(); ++i) {
        const Vec2& a = verts[i];
        const Vec2& b = verts[(i + 1) % verts.size()];
        rep.min_subtriangle_angle = std::min(
            {rep.min_subtriangle_angle, angle(c, a, b), angle(a, b, c), angle(b, c, a)});
      }
    }
  }
  return rep;
}

}  // namespace lsfem
