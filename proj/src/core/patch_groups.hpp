#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "core/image.hpp"

namespace gscir {

struct GroupGeometry {
  int patch_side = 8;     // patches are patch_side x patch_side
  int group_size = 60;    // patches per group, reference included
  int search_radius = 10; // candidate origins within +/- radius of the reference
  int stride = 4;         // spacing of the reference grid

  int patch_dim() const { return patch_side * patch_side; }
};

// Columns of data are vectorized patches: pixel (pr, pc) of a patch maps
// to row pc * patch_side + pr (patch columns stacked top to bottom).
// Column 0 is always the reference patch itself.
struct PatchGroup {
  Eigen::MatrixXd data;                       // patch_dim x group_size
  std::vector<std::pair<int, int>> origins;   // (row, col) of each column
  int reference_index = 0;
  bool padded = false;  // window held fewer candidates than group_size
};

// Row-major stride grid of patch origins, with the last row/column snapped
// so the bottom/right patches touch the image border. Throws if the image
// cannot hold a single patch.
std::vector<std::pair<int, int>> extract_reference_positions(int image_height,
                                                             int image_width,
                                                             const GroupGeometry& geom);

// Candidates are all valid patch origins within the search window around
// ref, scanned row-major; the group_size nearest by squared Euclidean
// distance are kept, ties broken by scan order, reference first.
PatchGroup block_match(const Plane& image, std::pair<int, int> ref,
                       const GroupGeometry& geom);

// Per-pixel average of every group column covering that pixel. Throws if
// some pixel is covered by no patch.
Plane aggregate_groups(const std::vector<PatchGroup>& groups, int image_height,
                       int image_width, int patch_side);

}  // namespace gscir
