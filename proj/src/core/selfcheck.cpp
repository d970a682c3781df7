#include "core/selfcheck.hpp"

#include <cmath>
#include <sstream>

#include "core/admm.hpp"
#include "core/degradation.hpp"
#include "core/gsc_denoiser.hpp"
#include "core/patch_groups.hpp"
#include "core/rng.hpp"
#include "core/shrinkage.hpp"

namespace gscir {

namespace {

// Coarse grid plus local refinement; see tests/oracles.hpp for the same
// construction with the full 1e-5 step.
double prox_oracle(double delta, double xi, double p) {
  auto f = [&](double s) { return 0.5 * (s - delta) * (s - delta) + xi * std::pow(s, p); };
  if (delta <= 0.0) return 0.0;
  const double coarse = delta / 4000.0;
  double best_s = 0.0, best_f = f(0.0);
  for (int i = 1; i <= 4000; ++i) {
    double s = i * coarse;
    if (double v = f(s); v < best_f) {
      best_f = v;
      best_s = s;
    }
  }
  double lo = std::max(0.0, best_s - 2 * coarse), hi = std::min(delta, best_s + 2 * coarse);
  const double fine = 1e-6 * std::max(1.0, delta);
  for (double s = lo; s <= hi; s += fine)
    if (double v = f(s); v < best_f) {
      best_f = v;
      best_s = s;
    }
  return best_s;
}

CheckResult check_prox(const SelfCheckOptions& opt) {
  double worst = 0.0;
  for (double p : {0.5, 2.0 / 3.0, 1.0}) {
    for (double xi : {0.01, 0.1, 1.0, 5.0}) {
      for (int i = 0; i < 60; ++i) {
        double delta = 20.0 * (i + 0.5) / 60.0;
        double closed;
        if (p == 1.0)
          closed = std::max(delta - xi, 0.0);
        else if (p == 0.5)
          closed = half_threshold_op(delta, kProxPenaltyScale * xi, opt.threshold_scale);
        else
          closed = two_thirds_threshold_op(delta, kProxPenaltyScale * xi, opt.threshold_scale);
        double ref = prox_oracle(delta, xi, p);
        double err = std::abs(closed - ref);
        if (err > 1e-4) {
          // At the jump threshold both branches minimize; equal objective
          // values mean either answer is acceptable.
          auto f = [&](double s) {
            return 0.5 * (s - delta) * (s - delta) + xi * std::pow(s, p);
          };
          if (std::abs(f(closed) - f(ref)) <= 1e-9 * (1.0 + std::abs(f(ref)))) err = 0.0;
        }
        worst = std::max(worst, err);
      }
    }
  }
  std::ostringstream d;
  d << "max |closed-form - grid minimizer| = " << worst;
  return {"prox_oracle_equivalence", worst <= 1e-4, d.str()};
}

CheckResult check_adjoints() {
  Rng rng(7);
  auto rand_plane = [&](int h, int w) {
    Plane p(h, w);
    for (int r = 0; r < h; ++r)
      for (int c = 0; c < w; ++c) p(r, c) = rng.normal();
    return p;
  };
  auto rand_vec = [&](long n) {
    Eigen::VectorXd v(n);
    for (long i = 0; i < n; ++i) v[i] = rng.normal();
    return v;
  };

  const int h = 64, w = 64;
  MaskOperator mask(make_random_mask(h, w, 0.5, 11));
  BlurOperator blur(make_uniform_kernel(9), h, w);
  BlockCsOperator cs(16, 0.3, 13, h, w);
  const LinearOperator* ops[] = {&mask, &blur, &cs};

  double worst = 0.0;
  for (const auto* op : ops) {
    for (int trial = 0; trial < 4; ++trial) {
      Plane x = rand_plane(h, w);
      Eigen::VectorXd y = rand_vec(op->measurement_size());
      double lhs = op->apply(x).dot(y);
      double rhs = (x.array() * op->adjoint(y).array()).sum();
      double scale = std::max(1.0, std::max(std::abs(lhs), std::abs(rhs)));
      worst = std::max(worst, std::abs(lhs - rhs) / scale);
    }
  }
  std::ostringstream d;
  d << "max relative <Ax,y>-<x,A'y> gap = " << worst;
  return {"operator_adjoint_identity", worst <= 1e-8, d.str()};
}

CheckResult check_aggregation() {
  Rng rng(3);
  Plane img(41, 37);
  for (int r = 0; r < img.rows(); ++r)
    for (int c = 0; c < img.cols(); ++c) img(r, c) = 255.0 * rng.uniform();
  GroupGeometry geom;
  geom.patch_side = 8;
  geom.stride = 4;
  geom.group_size = 12;
  geom.search_radius = 10;
  std::vector<PatchGroup> groups;
  for (auto ref : extract_reference_positions(int(img.rows()), int(img.cols()), geom))
    groups.push_back(block_match(img, ref, geom));
  Plane back = aggregate_groups(groups, int(img.rows()), int(img.cols()), geom.patch_side);
  double worst = (back - img).cwiseAbs().maxCoeff();
  std::ostringstream d;
  d << "max round-trip error = " << worst;
  return {"aggregation_round_trip", worst <= 1e-10, d.str()};
}

CheckResult check_objective_descent() {
  Rng rng(17);
  RelaxationSpec spec;
  spec.family = RelaxFamily::WeightedSchattenP;
  spec.p = 0.5;
  double lambda = 25.0;
  double worst_rise = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    Eigen::MatrixXd y(36, 60);
    for (int r = 0; r < y.rows(); ++r)
      for (int c = 0; c < y.cols(); ++c) y(r, c) = 50.0 * rng.normal();
    double prev = std::numeric_limits<double>::infinity();
    for (int iters = 1; iters <= 4; ++iters) {
      SvProxResult res = denoise_group(y, lambda, spec, iters);
      double fid = 0.5 * (y - res.x).squaredNorm();
      double pen = 0.0;
      for (Eigen::Index i = 0; i < res.spectrum.values.size(); ++i)
        pen += rho_eval(spec, rho_eval(spec, res.spectrum.values[i]));
      double obj = fid + lambda * pen;
      if (std::isfinite(prev)) worst_rise = std::max(worst_rise, obj - prev);
      prev = obj;
    }
  }
  std::ostringstream d;
  d << "max per-step objective rise = " << worst_rise;
  return {"surrogate_objective_descent", worst_rise <= 1e-8, d.str()};
}

}  // namespace

std::vector<CheckResult> run_self_checks(const SelfCheckOptions& options) {
  return {check_prox(options), check_adjoints(), check_aggregation(),
          check_objective_descent()};
}

bool all_passed(const std::vector<CheckResult>& results) {
  for (const auto& r : results)
    if (!r.passed) return false;
  return true;
}

}  // namespace gscir
