#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "core/admm.hpp"
#include "core/image.hpp"
#include "core/param_tables.hpp"

namespace gscir {

// Everything a restoration run needs. Negative overrides mean "use the
// task default"; (mu, lambda) default from the built-in tables.
struct TaskOptions {
  TaskKind kind = TaskKind::Inpaint;
  double p = 0.5;

  double subrate = 0.3;      // cs
  double missing = 0.5;      // inpaint
  double density = 0.3;      // spn
  double noise_sigma = -1;   // deblur additive noise (default sqrt(2)); denoise synthesis
  std::string kernel = "uniform9";
  std::string mask_path;     // textremove; optional for degraded-input inpaint

  double mu = -1.0;
  double lambda = -1.0;
  int patch_side = -1;
  int group_size = -1;
  int stride = -1;
  int search_radius = -1;
  double epsilon = 0.1;
  int inner_iters = -1;
  int max_outer_iters = -1;
  double tol = 5e-4;
  int grad_steps = -1;
  int block_side = 32;
  uint64_t seed = 0;
  int threads = 1;  // 0 = hardware concurrency
};

struct TaskResult {
  Image restored;
  Image degraded;        // image-form baseline used for psnr_in (for spn:
                         // the adaptive-median-filtered image)
  Image degraded_input;  // the degraded observation itself (for spn: the
                         // corrupted image); equals `degraded` elsewhere
  double psnr_in;   // baseline vs reference; NaN without a reference
  double psnr_out;  // restored vs reference; NaN without a reference
  int iterations = 0;
  double seconds = 0.0;
  std::vector<TraceRecord> trace;
  double mu = 0.0, lambda = 0.0;
  std::string param_desc;
};

// Serialized block-CS measurements: the operator is regenerated from
// (seed, block_side, subrate) so only those and the data are stored.
struct CsMeasurements {
  int height = 0, width = 0, channels = 0, block_side = 32;
  double subrate = 0.3;
  uint64_t seed = 0;
  std::vector<Eigen::VectorXd> b;  // one vector per channel
};
void save_cs_measurements(const CsMeasurements& m, const std::string& path);
CsMeasurements load_cs_measurements(const std::string& path);

// Synthesize the degradation from a clean image, then restore.
TaskResult run_task(const TaskOptions& options, const Image& clean);

// Restore a supplied degraded image (mask/blur/spn tasks); the optional
// reference is only used for PSNR reporting.
TaskResult run_task_on_degraded(const TaskOptions& options, const Image& degraded,
                                const Image* reference);

// Restore from serialized CS measurements.
TaskResult run_task_on_measurements(const TaskOptions& options, const CsMeasurements& m,
                                    const Image* reference);

void write_trace(const std::vector<TraceRecord>& trace, const std::string& path);

std::string one_line_summary(const TaskOptions& options, const TaskResult& result);

}  // namespace gscir
