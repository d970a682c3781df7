#include <gscir.h>

#include <cmath>
#include <cstdio>
#include <string>

#include <CLI11.hpp>

namespace {

struct CommonArgs {
  std::string input, output, degraded_in, degraded_out, trace, mask;
  double p = 0.5;
  double mu = -1.0, lambda = -1.0;
  int patch_side = -1, group_size = -1, stride = -1, search_radius = -1;
  double epsilon = 0.1, tol = 5e-4;
  int inner_iters = -1, iters = -1, grad_steps = -1, block_side = 32;
  uint64_t seed = 0;
  int threads = 1;
  bool gray = false;
};

void add_common(CLI::App* cmd, CommonArgs& a, bool need_input) {
  auto* in = cmd->add_option("-i,--input", a.input,
                             "clean input image (or PSNR reference with --degraded)");
  if (need_input) in->required();
  cmd->add_option("-o,--output", a.output, "restored image path (.png/.pgm/.ppm)");
  cmd->add_option("--degraded", a.degraded_in,
                  "restore this degraded input instead of synthesizing one");
  cmd->add_option("--save-degraded", a.degraded_out, "save the synthesized degraded input");
  cmd->add_option("--trace", a.trace, "write per-iteration trace CSV here");
  cmd->add_option("-p", a.p, "rank surrogate exponent: 0.5, 0.6667 or 1.0")
      ->default_val(0.5);
  cmd->add_option("--mu", a.mu, "penalty mu (default: built-in table)");
  cmd->add_option("--lambda", a.lambda, "penalty lambda (default: built-in table)");
  cmd->add_option("--patch-side", a.patch_side, "patch side in pixels");
  cmd->add_option("--group-size", a.group_size, "similar patches per group (default 60)");
  cmd->add_option("--stride", a.stride, "reference patch stride");
  cmd->add_option("--search-radius", a.search_radius, "block-match half window (default 10)");
  cmd->add_option("--epsilon", a.epsilon, "weight cap epsilon")->default_val(0.1);
  cmd->add_option("--inner-iters", a.inner_iters, "reweighting rounds per group (default 2)");
  cmd->add_option("--iters", a.iters, "max outer iterations");
  cmd->add_option("--tol", a.tol, "relative-change stopping tolerance")->default_val(5e-4);
  cmd->add_option("--seed", a.seed, "RNG seed")->default_val(0);
  cmd->add_option("--threads", a.threads, "worker threads, 0 = auto")->default_val(1);
  cmd->add_flag("--gray", a.gray, "convert the input to grayscale first");
}

int fail(const char* where) {
  std::fprintf(stderr, "gscir: %s: %s\n", where, gscir_last_error());
  return 1;
}

int run(const std::string& task_name, const CommonArgs& a,
        const std::vector<std::pair<std::string, double>>& extra_nums,
        const std::vector<std::pair<std::string, std::string>>& extra_strs) {
  gscir_task* task = nullptr;
  if (gscir_task_create(task_name.c_str(), &task) != GSCIR_OK) return fail("task");

  auto set = [&](const char* k, double v) { return gscir_task_set(task, k, v) == GSCIR_OK; };
  bool ok = set("p", a.p) && set("epsilon", a.epsilon) && set("tol", a.tol) &&
            set("seed", double(a.seed)) && set("threads", a.threads) &&
            set("block_side", a.block_side);
  if (a.mu > 0) ok = ok && set("mu", a.mu);
  if (a.lambda >= 0) ok = ok && set("lambda", a.lambda);
  if (a.patch_side > 0) ok = ok && set("patch_side", a.patch_side);
  if (a.group_size > 0) ok = ok && set("group_size", a.group_size);
  if (a.stride > 0) ok = ok && set("stride", a.stride);
  if (a.search_radius > 0) ok = ok && set("search_radius", a.search_radius);
  if (a.inner_iters > 0) ok = ok && set("inner_iters", a.inner_iters);
  if (a.iters > 0) ok = ok && set("iters", a.iters);
  if (a.grad_steps > 0) ok = ok && set("grad_steps", a.grad_steps);
  for (auto& [k, v] : extra_nums) ok = ok && set(k.c_str(), v);
  if (!ok) {
    int r = fail("set");
    gscir_task_free(task);
    return r;
  }
  auto set_str = [&](const char* k, const std::string& v) {
    return v.empty() || gscir_task_set_string(task, k, v.c_str()) == GSCIR_OK;
  };
  if (!set_str("trace", a.trace) || !set_str("degraded_in", a.degraded_in) ||
      !set_str("degraded_out", a.degraded_out) || !set_str("mask", a.mask)) {
    int r = fail("set");
    gscir_task_free(task);
    return r;
  }
  for (auto& [k, v] : extra_strs)
    if (!set_str(k.c_str(), v)) {
      int r = fail("set");
      gscir_task_free(task);
      return r;
    }

  gscir_image* input = nullptr;
  if (!a.input.empty()) {
    if (gscir_image_load(a.input.c_str(), &input) != GSCIR_OK) {
      int r = fail("load");
      gscir_task_free(task);
      return r;
    }
    if (a.gray && gscir_image_channels(input) == 3) {
      int h = gscir_image_height(input), w = gscir_image_width(input);
      std::vector<double> buf(size_t(h) * size_t(w) * 3);
      gscir_image_data(input, buf.data(), buf.size());
      std::vector<double> g(size_t(h) * size_t(w));
      for (size_t i = 0; i < g.size(); ++i)
        g[i] = 0.299 * buf[3 * i] + 0.587 * buf[3 * i + 1] + 0.114 * buf[3 * i + 2];
      gscir_image* gimg = nullptr;
      if (gscir_image_create(h, w, 1, g.data(), &gimg) != GSCIR_OK) {
        int r = fail("gray");
        gscir_image_free(input);
        gscir_task_free(task);
        return r;
      }
      gscir_image_free(input);
      input = gimg;
    }
  }

  gscir_image* restored = nullptr;
  gscir_report report{};
  gscir_status st = gscir_task_run(task, input, &restored, &report);
  if (st != GSCIR_OK) {
    int r = fail("run");
    gscir_image_free(input);
    gscir_task_free(task);
    return r;
  }

  std::printf("%s\n", gscir_task_summary(task));
  if (!a.output.empty() && gscir_image_save(restored, a.output.c_str()) != GSCIR_OK) {
    int r = fail("save");
    gscir_image_free(restored);
    gscir_image_free(input);
    gscir_task_free(task);
    return r;
  }

  gscir_image_free(restored);
  gscir_image_free(input);
  gscir_task_free(task);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gscir - group-sparse low-rank image restoration"};
  app.require_subcommand(1);

  CommonArgs cs_args, inp_args, text_args, deb_args, spn_args, den_args;
  double subrate = 0.3, missing = 0.5, density = 0.3;
  double deblur_sigma = std::sqrt(2.0), denoise_sigma = -1.0;
  std::string kernel = "uniform9";
  int grad_steps = -1;

  auto* cs = app.add_subcommand("cs", "block compressive sensing recovery");
  add_common(cs, cs_args, true);
  cs->add_option("--subrate", subrate, "sampling ratio in (0,1]")->default_val(0.3);
  cs->add_option("--block-side", cs_args.block_side, "measurement block side")
      ->default_val(32);
  cs->add_option("--grad-steps", grad_steps, "gradient steps per outer iteration")
      ->default_val(200);

  auto* inp = app.add_subcommand("inpaint", "restoration from partial random samples");
  add_common(inp, inp_args, true);
  inp->add_option("--missing", missing, "missing pixel fraction in [0,1)")->default_val(0.5);
  inp->add_option("--mask", inp_args.mask, "mask image for --degraded runs (0 = missing)");

  auto* text = app.add_subcommand("textremove", "inpainting with a supplied mask");
  add_common(text, text_args, true);
  text->add_option("--mask", text_args.mask, "mask image (0 = missing)")->required();

  auto* deb = app.add_subcommand("deblur", "non-blind deconvolution");
  add_common(deb, deb_args, true);
  deb->add_option("--kernel", kernel,
                  "uniform9|gaussian25|motion20|uniform:<s>|gaussian:<s>:<sig>|motion:<l>:<a>")
      ->default_val("uniform9");
  deb->add_option("--sigma", deblur_sigma, "additive noise std dev")
      ->default_val(std::sqrt(2.0));

  auto* spn = app.add_subcommand("spn", "salt-and-pepper noise removal");
  add_common(spn, spn_args, true);
  spn->add_option("--density", density, "corruption density in [0,1]")->default_val(0.3);

  auto* den = app.add_subcommand("denoise", "single-pass group low-rank denoising");
  add_common(den, den_args, true);
  den->add_option("--sigma", denoise_sigma,
                  "synthesize Gaussian noise at this level (input is noisy if unset)");

  auto* verify = app.add_subcommand("verify", "run the numerical self-checks");

  CLI11_PARSE(app, argc, argv);

  if (verify->parsed()) {
    int failed = gscir_verify(1);
    std::printf("%s\n", failed == 0 ? "all checks passed" : "CHECKS FAILED");
    return failed == 0 ? 0 : 1;
  }
  if (cs->parsed()) {
    cs_args.grad_steps = grad_steps;
    return run("cs", cs_args, {{"subrate", subrate}}, {});
  }
  if (inp->parsed()) return run("inpaint", inp_args, {{"missing", missing}}, {});
  if (text->parsed()) return run("textremove", text_args, {}, {});
  if (deb->parsed())
    return run("deblur", deb_args, {{"sigma", deblur_sigma}}, {{"kernel", kernel}});
  if (spn->parsed()) return run("spn", spn_args, {{"density", density}}, {});
  if (den->parsed()) {
    std::vector<std::pair<std::string, double>> nums;
    if (denoise_sigma > 0) nums.emplace_back("sigma", denoise_sigma);
    return run("denoise", den_args, nums, {});
  }
  return 0;
}
