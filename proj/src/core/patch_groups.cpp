#include "core/patch_groups.hpp"

#include <algorithm>
#include <stdexcept>

namespace gscir {

namespace {

std::vector<int> stride_axis(int extent, int side, int stride) {
  std::vector<int> out;
  for (int r = 0; r + side < extent; r += stride) out.push_back(r);
  int last = extent - side;
  if (out.empty() || out.back() != last) out.push_back(last);
  return out;
}

void copy_patch(const Plane& image, int r0, int c0, int side,
                Eigen::Ref<Eigen::VectorXd> dst) {
  int k = 0;
  for (int pc = 0; pc < side; ++pc)
    for (int pr = 0; pr < side; ++pr) dst[k++] = image(r0 + pr, c0 + pc);
}

}  // namespace

std::vector<std::pair<int, int>> extract_reference_positions(int image_height,
                                                             int image_width,
                                                             const GroupGeometry& geom) {
  if (geom.patch_side < 1 || geom.stride < 1 || geom.group_size < 1)
    throw std::invalid_argument("extract_reference_positions: bad geometry");
  if (image_height < geom.patch_side || image_width < geom.patch_side)
    throw std::invalid_argument("extract_reference_positions: image smaller than one patch");
  auto rows = stride_axis(image_height, geom.patch_side, geom.stride);
  auto cols = stride_axis(image_width, geom.patch_side, geom.stride);
  std::vector<std::pair<int, int>> out;
  out.reserve(rows.size() * cols.size());
  for (int r : rows)
    for (int c : cols) out.emplace_back(r, c);
  return out;
}

PatchGroup block_match(const Plane& image, std::pair<int, int> ref,
                       const GroupGeometry& geom) {
  const int side = geom.patch_side;
  const int h = int(image.rows()), w = int(image.cols());
  const auto [rr, rc] = ref;
  if (rr < 0 || rc < 0 || rr + side > h || rc + side > w)
    throw std::invalid_argument("block_match: reference out of bounds");

  const int r_lo = std::max(0, rr - geom.search_radius);
  const int r_hi = std::min(h - side, rr + geom.search_radius);
  const int c_lo = std::max(0, rc - geom.search_radius);
  const int c_hi = std::min(w - side, rc + geom.search_radius);

  const auto ref_block = image.block(rr, rc, side, side);

  struct Cand {
    double dist;
    int scan;
    int r, c;
  };
  std::vector<Cand> cands;
  cands.reserve(size_t(r_hi - r_lo + 1) * size_t(c_hi - c_lo + 1));
  int scan = 0;
  for (int r = r_lo; r <= r_hi; ++r)
    for (int c = c_lo; c <= c_hi; ++c, ++scan) {
      if (r == rr && c == rc) continue;
      double d = (image.block(r, c, side, side) - ref_block).squaredNorm();
      cands.push_back({d, scan, r, c});
    }
  std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
    return a.dist != b.dist ? a.dist < b.dist : a.scan < b.scan;
  });

  PatchGroup group;
  group.reference_index = 0;
  group.origins.emplace_back(rr, rc);
  const int wanted = geom.group_size;
  for (int i = 0; i + 1 < wanted && i < int(cands.size()); ++i)
    group.origins.emplace_back(cands[size_t(i)].r, cands[size_t(i)].c);
  if (int(group.origins.size()) < wanted) {
    group.padded = true;
    size_t avail = group.origins.size();
    while (int(group.origins.size()) < wanted)
      group.origins.push_back(group.origins[group.origins.size() % avail]);
  }

  group.data.resize(geom.patch_dim(), wanted);
  for (int j = 0; j < wanted; ++j) {
    auto [r, c] = group.origins[size_t(j)];
    copy_patch(image, r, c, side, group.data.col(j));
  }
  return group;
}

Plane aggregate_groups(const std::vector<PatchGroup>& groups, int image_height,
                       int image_width, int patch_side) {
  Plane sum = Plane::Zero(image_height, image_width);
  Plane count = Plane::Zero(image_height, image_width);
  for (const auto& g : groups) {
    for (size_t j = 0; j < g.origins.size(); ++j) {
      auto [r0, c0] = g.origins[j];
      if (r0 < 0 || c0 < 0 || r0 + patch_side > image_height || c0 + patch_side > image_width)
        throw std::invalid_argument("aggregate_groups: origin out of bounds");
      int k = 0;
      for (int pc = 0; pc < patch_side; ++pc)
        for (int pr = 0; pr < patch_side; ++pr) {
          sum(r0 + pr, c0 + pc) += g.data(k++, Eigen::Index(j));
          count(r0 + pr, c0 + pc) += 1.0;
        }
    }
  }
  if ((count.array() == 0.0).any())
    throw std::runtime_error("aggregate_groups: uncovered pixel, geometry is broken");
  return sum.array() / count.array();
}

}  // namespace gscir
