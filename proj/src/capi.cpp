#include "gscir.h"

#include <cmath>
#include <cstring>
#include <string>

#include "core/image.hpp"
#include "core/selfcheck.hpp"
#include "core/tasks.hpp"

using gscir::Image;

struct gscir_image {
  Image img;
};

struct gscir_task {
  gscir::TaskOptions options;
  std::string trace_path;
  std::string degraded_in;
  std::string degraded_out;
  // last-run state
  bool has_result = false;
  gscir::TaskResult result;
  std::string summary;
};

namespace {

thread_local std::string g_last_error;

gscir_status fail(gscir_status code, const std::string& message) {
  g_last_error = message;
  return code;
}

template <typename Fn>
gscir_status guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const std::invalid_argument& e) {
    return fail(GSCIR_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::ios_base::failure& e) {
    return fail(GSCIR_ERR_IO, e.what());
  } catch (const std::exception& e) {
    std::string what = e.what();
    if (what.find("cannot open") != std::string::npos ||
        what.find("cannot write") != std::string::npos ||
        what.find("truncated") != std::string::npos)
      return fail(GSCIR_ERR_IO, what);
    return fail(GSCIR_ERR_NUMERIC, what);
  }
}

bool has_suffix(const std::string& s, const std::string& suf) {
  return s.size() >= suf.size() && s.compare(s.size() - suf.size(), suf.size(), suf) == 0;
}

}  // namespace

extern "C" {

const char* gscir_last_error(void) { return g_last_error.c_str(); }

const char* gscir_version(void) { return "0.1.0"; }

gscir_status gscir_image_load(const char* path, gscir_image** out) {
  if (!path || !out) return fail(GSCIR_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    auto* h = new gscir_image{gscir::load_image(path)};
    *out = h;
    return GSCIR_OK;
  });
}

gscir_status gscir_image_save(const gscir_image* img, const char* path) {
  if (!img || !path) return fail(GSCIR_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    gscir::save_image(img->img, path);
    return GSCIR_OK;
  });
}

gscir_status gscir_image_create(int height, int width, int channels, const double* data,
                                gscir_image** out) {
  if (!data || !out) return fail(GSCIR_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    Image img(height, width, channels);
    size_t i = 0;
    for (int r = 0; r < height; ++r)
      for (int c = 0; c < width; ++c)
        for (int ch = 0; ch < channels; ++ch) img.at(r, c, ch) = data[i++];
    *out = new gscir_image{std::move(img)};
    return GSCIR_OK;
  });
}

void gscir_image_free(gscir_image* img) { delete img; }

int gscir_image_height(const gscir_image* img) { return img ? img->img.height() : 0; }
int gscir_image_width(const gscir_image* img) { return img ? img->img.width() : 0; }
int gscir_image_channels(const gscir_image* img) { return img ? img->img.channels() : 0; }

gscir_status gscir_image_data(const gscir_image* img, double* buffer, size_t buffer_len) {
  if (!img || !buffer) return fail(GSCIR_ERR_INVALID_ARGUMENT, "null argument");
  size_t need = size_t(img->img.height()) * size_t(img->img.width()) *
                size_t(img->img.channels());
  if (buffer_len < need) return fail(GSCIR_ERR_INVALID_ARGUMENT, "buffer too small");
  size_t i = 0;
  for (int r = 0; r < img->img.height(); ++r)
    for (int c = 0; c < img->img.width(); ++c)
      for (int ch = 0; ch < img->img.channels(); ++ch) buffer[i++] = img->img.at(r, c, ch);
  return GSCIR_OK;
}

gscir_status gscir_psnr(const gscir_image* a, const gscir_image* b, double* out) {
  if (!a || !b || !out) return fail(GSCIR_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    double v = gscir::psnr(a->img, b->img);
    *out = std::isinf(v) ? HUGE_VAL : v;
    return GSCIR_OK;
  });
}

gscir_status gscir_task_create(const char* task_name, gscir_task** out) {
  if (!task_name || !out) return fail(GSCIR_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    auto* t = new gscir_task;
    t->options.kind = gscir::task_from_name(task_name);
    *out = t;
    return GSCIR_OK;
  });
}

void gscir_task_free(gscir_task* task) { delete task; }

gscir_status gscir_task_set(gscir_task* task, const char* key, double value) {
  if (!task || !key) return fail(GSCIR_ERR_INVALID_ARGUMENT, "null argument");
  std::string k = key;
  auto& o = task->options;
  if (k == "p") o.p = value;
  else if (k == "subrate") o.subrate = value;
  else if (k == "missing") o.missing = value;
  else if (k == "density") o.density = value;
  else if (k == "sigma") o.noise_sigma = value;
  else if (k == "mu") o.mu = value;
  else if (k == "lambda") o.lambda = value;
  else if (k == "patch_side") o.patch_side = int(value);
  else if (k == "group_size") o.group_size = int(value);
  else if (k == "stride") o.stride = int(value);
  else if (k == "search_radius") o.search_radius = int(value);
  else if (k == "epsilon") o.epsilon = value;
  else if (k == "inner_iters") o.inner_iters = int(value);
  else if (k == "iters") o.max_outer_iters = int(value);
  else if (k == "tol") o.tol = value;
  else if (k == "grad_steps") o.grad_steps = int(value);
  else if (k == "block_side") o.block_side = int(value);
  else if (k == "seed") o.seed = uint64_t(value);
  else if (k == "threads") o.threads = int(value);
  else return fail(GSCIR_ERR_INVALID_ARGUMENT, "unknown numeric key: " + k);
  return GSCIR_OK;
}

gscir_status gscir_task_set_string(gscir_task* task, const char* key, const char* value) {
  if (!task || !key || !value) return fail(GSCIR_ERR_INVALID_ARGUMENT, "null argument");
  std::string k = key;
  if (k == "kernel") task->options.kernel = value;
  else if (k == "mask") task->options.mask_path = value;
  else if (k == "trace") task->trace_path = value;
  else if (k == "degraded_in") task->degraded_in = value;
  else if (k == "degraded_out") task->degraded_out = value;
  else return fail(GSCIR_ERR_INVALID_ARGUMENT, "unknown string key: " + k);
  return GSCIR_OK;
}

gscir_status gscir_task_run(gscir_task* task, const gscir_image* input,
                            gscir_image** restored, gscir_report* report) {
  if (!task || !restored) return fail(GSCIR_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const Image* reference = input ? &input->img : nullptr;
    if (task->degraded_in.empty() && !input)
      throw std::invalid_argument("task needs an input image to synthesize the degradation");

    if (!task->degraded_in.empty()) {
      if (task->options.kind == gscir::TaskKind::CS && has_suffix(task->degraded_in, ".csm")) {
        auto m = gscir::load_cs_measurements(task->degraded_in);
        task->result = gscir::run_task_on_measurements(task->options, m, reference);
      } else {
        Image degraded = gscir::load_image(task->degraded_in);
        task->result = gscir::run_task_on_degraded(task->options, degraded, reference);
      }
    } else {
      task->result = gscir::run_task(task->options, input->img);
      if (!task->degraded_out.empty()) {
        if (task->options.kind == gscir::TaskKind::CS) {
          gscir::BlockCsOperator op(task->options.block_side, task->options.subrate,
                                    task->options.seed, input->img.height(),
                                    input->img.width());
          gscir::CsMeasurements m;
          m.height = input->img.height();
          m.width = input->img.width();
          m.channels = input->img.channels();
          m.block_side = task->options.block_side;
          m.subrate = task->options.subrate;
          m.seed = task->options.seed;
          for (int ch = 0; ch < m.channels; ++ch) m.b.push_back(op.apply(input->img.plane(ch)));
          gscir::save_cs_measurements(m, task->degraded_out);
        } else {
          gscir::save_image(task->result.degraded_input, task->degraded_out);
        }
      }
    }
    if (!task->trace_path.empty()) gscir::write_trace(task->result.trace, task->trace_path);

    task->has_result = true;
    task->summary = gscir::one_line_summary(task->options, task->result);
    *restored = new gscir_image{task->result.restored};
    if (report) {
      report->psnr_in = task->result.psnr_in;
      report->psnr_out = task->result.psnr_out;
      report->iterations = task->result.iterations;
      report->seconds = task->result.seconds;
      report->mu = task->result.mu;
      report->lambda = task->result.lambda;
    }
    return GSCIR_OK;
  });
}

gscir_status gscir_task_degraded(const gscir_task* task, gscir_image** out) {
  if (!task || !out) return fail(GSCIR_ERR_INVALID_ARGUMENT, "null argument");
  if (!task->has_result) return fail(GSCIR_ERR_INVALID_ARGUMENT, "task has not run");
  *out = new gscir_image{task->result.degraded};
  return GSCIR_OK;
}

const char* gscir_task_summary(const gscir_task* task) {
  return task && task->has_result ? task->summary.c_str() : "";
}

int gscir_verify(int verbose) {
  auto results = gscir::run_self_checks();
  int failed = 0;
  for (const auto& r : results) {
    if (!r.passed) ++failed;
    if (verbose)
      std::printf("%-32s %s  (%s)\n", r.name.c_str(), r.passed ? "PASS" : "FAIL",
                  r.detail.c_str());
  }
  return failed;
}

}  // extern "C"
