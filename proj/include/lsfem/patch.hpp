#pragma once

#include "lsfem/mesh.hpp"

#include <vector>

namespace lsfem {

/// Agglomeration of face-connected elements around an owner element K.
/// Members are ordered: K first, then each neighbor layer sorted by distance
/// of the member barycenter from K's (ties by angle); the final layer may be
/// truncated. The geometric order makes patches independent of element
/// numbering.
struct ElementPatch {
  int owner = -1;
  std::vector<int> members;
  std::vector<Vec2> sampling_nodes;  // barycenters, one per member
  int depth = 0;                     // neighbor layers reached

  int size() const { return static_cast<int>(members.size()); }
};

/// Grows the patch layer by layer until target_size members are collected
/// (or the connected component is exhausted, which is not an error).
ElementPatch build_patch(const Mesh& mesh, int element, int target_size);

/// Reference patch cardinalities (d = 2: 6/10/16, d = 3: 8/15/25 for
/// m = 1..3), clamped below by ceil(n_b/d) + 2. Degrees outside the table
/// fall back to the clamp value with a warning on stderr.
int default_patch_size(int m, int d = 2);

}  // namespace lsfem
