#pragma once

#include <vector>

#include "core/image.hpp"
#include "core/patch_groups.hpp"
#include "core/shrinkage.hpp"

namespace gscir {

struct DenoiserParams {
  GroupGeometry geom;
  RelaxationSpec relax;
  double tau = 0.0;     // effective per-group regularization
  int inner_iters = 2;  // reweighting rounds per group
  int threads = 1;      // 0 = hardware concurrency
};

// tau = lambda * (n_groups * group_size * patch_dim) / (mu * n_pixels).
double compute_tau(double lambda, double mu, long n_groups, const GroupGeometry& geom,
                   long n_pixels);

struct DenoisePlaneResult {
  Plane image;
  std::vector<Eigen::VectorXd> spectra;  // shrunken singular values per group
};

// One whole-image pass: group every reference patch of r by block
// matching, run the reweighted low-rank shrinkage on each group, and
// average the results back. Groups are processed in fixed chunks with
// a fixed aggregation order, so the output does not depend on the
// thread count.
DenoisePlaneResult denoise_plane(const Plane& r, const DenoiserParams& params);

// Channel-wise application of denoise_plane with shared parameters.
Image denoise_image(const Image& r, const DenoiserParams& params);

}  // namespace gscir
