#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "core/degradation.hpp"
#include "core/gsc_denoiser.hpp"
#include "core/image.hpp"

namespace gscir {

struct AdmmConfig {
  double mu = 1e-2;
  double lambda = 0.1;
  int max_outer_iters = 100;
  double tol = 5e-4;  // relative-change stopping threshold
  DenoiserParams denoiser;
  int grad_steps_per_outer = 200;  // CS data subproblem only
};

struct TraceRecord {
  int iteration;
  double rel_change;
  double psnr;  // NaN when no reference was supplied
};

// One channel of the splitting problem: its operator, observations and
// warm start.
struct ChannelProblem {
  const LinearOperator* op = nullptr;
  Eigen::VectorXd b;
  Plane z0;
};

struct RestoreResult {
  Image restored;  // clamped to [0, 255]
  std::vector<TraceRecord> trace;
  int iterations = 0;
};

// Exact data-term solves.
Plane z_update_mask(const Eigen::VectorXd& b, const MaskOperator& op, const Plane& x_plus_u,
                    double mu);
Plane z_update_blur(const Eigen::VectorXd& b, const BlurOperator& op, const Plane& x_plus_u,
                    double mu);
// Gradient descent with exact quadratic line search, `steps` iterations
// from z_init.
Plane z_update_cs(const Eigen::VectorXd& b, const BlockCsOperator& op, const Plane& x_plus_u,
                  double mu, int steps, const Plane& z_init);

// Hook for instrumentation; receives (iteration, z, x, u) after each
// outer iteration, one plane per channel.
using AdmmObserver = std::function<void(int, const std::vector<Plane>&,
                                        const std::vector<Plane>&, const std::vector<Plane>&)>;

// Splitting loop: data solve, denoiser pass on z - u, multiplier step
// u <- u - (z - x); stops on relative change or the iteration cap.
// Throws on non-finite state with the failing iteration in the message.
RestoreResult restore(const std::vector<ChannelProblem>& problems, const AdmmConfig& config,
                      const Image* reference = nullptr, const AdmmObserver& observer = {});

}  // namespace gscir
