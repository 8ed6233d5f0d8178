#include "lsfem/patch.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <vector>

namespace lsfem {

ElementPatch build_patch(const Mesh& mesh, int element, int target_size) {
  require(element >= 0 && element < mesh.num_elements(), "build_patch: element id out of range");
  require(target_size >= 1, "build_patch: target_size must be >= 1");

  ElementPatch patch;
  patch.owner = element;
  patch.members.push_back(element);
  std::vector<char> in_patch(static_cast<std::size_t>(mesh.num_elements()), 0);
  in_patch[static_cast<std::size_t>(element)] = 1;

  // layers are ordered geometrically (distance from the owner's barycenter,
  // then angle) so the truncated final layer does not depend on element ids
  const Vec2 center = barycenter(mesh, element);
  auto geometric_less = [&mesh, &center](int a, int b) {
    const Vec2 da = barycenter(mesh, a) - center;
    const Vec2 db = barycenter(mesh, b) - center;
    const double ra = da.squaredNorm(), rb = db.squaredNorm();
    if (ra != rb) return ra < rb;
    const double ta = std::atan2(da.y(), da.x()), tb = std::atan2(db.y(), db.x());
    if (ta != tb) return ta < tb;
    return a < b;
  };

  std::vector<int> layer{element};
  while (patch.size() < target_size) {
    std::vector<int> next;
    for (int k : layer)
      for (int nb : mesh.element_neighbors[static_cast<std::size_t>(k)])
        if (!in_patch[static_cast<std::size_t>(nb)]) {
          in_patch[static_cast<std::size_t>(nb)] = 1;
          next.push_back(nb);
        }
    if (next.empty()) break;  // component exhausted
    std::sort(next.begin(), next.end(), geometric_less);
    ++patch.depth;
    for (int nb : next) {
      if (patch.size() == target_size) break;
      patch.members.push_back(nb);
    }
    layer = std::move(next);
  }

  patch.sampling_nodes.reserve(patch.members.size());
  for (int k : patch.members) patch.sampling_nodes.push_back(barycenter(mesh, k));
  return patch;
}

int default_patch_size(int m, int d) {
  require(m >= 1, "default_patch_size: m must be >= 1");
  require(d == 2 || d == 3, "default_patch_size: d must be 2 or 3");
  const int nb = d == 2 ? (m + 2) * (m + 3) / 2 - 1 : (m + 2) * (m + 3) * (m + 4) / 6 - 1;
  const int floor = (nb + d - 1) / d + 2;
  if (m >= 1 && m <= 3) {
    static constexpr int table2[3] = {6, 10, 16};
    static constexpr int table3[3] = {8, 15, 25};
    const int v = d == 2 ? table2[m - 1] : table3[m - 1];
    return std::max(v, floor);
  }
  std::cerr << "default_patch_size: no reference value for m = " << m << ", using floor "
            << floor << "\n";
  return floor;
}

}  // namespace lsfem
