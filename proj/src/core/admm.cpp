#include "core/admm.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace gscir {

Plane z_update_mask(const Eigen::VectorXd& b, const MaskOperator& op, const Plane& x_plus_u,
                    double mu) {
  if (mu <= 0.0) throw std::invalid_argument("z_update_mask: mu must be positive");
  const auto& a = op.mask();
  Plane bimg = Eigen::Map<const Plane>(b.data(), a.rows(), a.cols());
  return ((a * bimg.array() + mu * x_plus_u.array()) / (a + mu)).matrix();
}

Plane z_update_blur(const Eigen::VectorXd& b, const BlurOperator& op, const Plane& x_plus_u,
                    double mu) {
  if (mu <= 0.0) throw std::invalid_argument("z_update_blur: mu must be positive");
  Plane bimg = Eigen::Map<const Plane>(b.data(), op.height(), op.width());
  return op.quadratic_solve(bimg, x_plus_u, mu);
}

Plane z_update_cs(const Eigen::VectorXd& b, const BlockCsOperator& op, const Plane& x_plus_u,
                  double mu, int steps, const Plane& z_init) {
  if (steps < 1) throw std::invalid_argument("z_update_cs: steps must be >= 1");
  Plane z = z_init;
  const double done = 1e-24 * (1.0 + b.squaredNorm());  // gradient numerically zero
  for (int s = 0; s < steps; ++s) {
    Eigen::VectorXd residual = op.apply(z) - b;
    Plane d = op.adjoint(residual) + mu * (z - x_plus_u);
    double dd = d.squaredNorm();
    if (dd <= done) break;  // already optimal
    double ad2 = op.apply(d).squaredNorm();
    double eta = dd / (ad2 + mu * dd);
    z -= eta * d;
  }
  return z;
}

namespace {

Plane dispatch_z_update(const ChannelProblem& prob, const Plane& q, const Plane& z_prev,
                        const AdmmConfig& cfg) {
  switch (prob.op->kind()) {
    case LinearOperator::Kind::Mask:
      return z_update_mask(prob.b, static_cast<const MaskOperator&>(*prob.op), q, cfg.mu);
    case LinearOperator::Kind::Blur:
      return z_update_blur(prob.b, static_cast<const BlurOperator&>(*prob.op), q, cfg.mu);
    case LinearOperator::Kind::BlockCS:
      return z_update_cs(prob.b, static_cast<const BlockCsOperator&>(*prob.op), q, cfg.mu,
                         cfg.grad_steps_per_outer, z_prev);
  }
  throw std::logic_error("dispatch_z_update: unknown operator kind");
}

}  // namespace

RestoreResult restore(const std::vector<ChannelProblem>& problems, const AdmmConfig& config,
                      const Image* reference, const AdmmObserver& observer) {
  if (problems.empty()) throw std::invalid_argument("restore: no channels");
  const int channels = int(problems.size());
  const int h = int(problems[0].z0.rows()), w = int(problems[0].z0.cols());
  for (const auto& p : problems) {
    if (!p.op) throw std::invalid_argument("restore: null operator");
    if (p.z0.rows() != h || p.z0.cols() != w)
      throw std::invalid_argument("restore: channel shapes differ");
  }

  DenoiserParams den = config.denoiser;
  const long n_groups = long(extract_reference_positions(h, w, den.geom).size());
  den.tau = compute_tau(config.lambda, config.mu, n_groups, den.geom, long(h) * long(w));

  std::vector<Plane> z, u, x;
  for (const auto& p : problems) {
    z.push_back(p.z0);
    u.push_back(Plane::Zero(h, w));
    x.push_back(p.z0);
  }

  RestoreResult result;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (int iter = 1; iter <= config.max_outer_iters; ++iter) {
    double diff_sq = 0.0, old_sq = 0.0;
    for (int ch = 0; ch < channels; ++ch) {
      z[size_t(ch)] = dispatch_z_update(problems[size_t(ch)], x[size_t(ch)] + u[size_t(ch)],
                                        z[size_t(ch)], config);
      if (!z[size_t(ch)].allFinite())
        throw std::runtime_error("restore: non-finite data solve at iteration " +
                                 std::to_string(iter));
      Plane r = z[size_t(ch)] - u[size_t(ch)];
      Plane x_new = denoise_plane(r, den).image;
      if (!x_new.allFinite())
        throw std::runtime_error("restore: non-finite denoiser output at iteration " +
                                 std::to_string(iter));
      u[size_t(ch)] -= z[size_t(ch)] - x_new;
      diff_sq += (x_new - x[size_t(ch)]).squaredNorm();
      old_sq += x[size_t(ch)].squaredNorm();
      x[size_t(ch)] = std::move(x_new);
    }
    double rel = std::sqrt(diff_sq) / std::max(std::sqrt(old_sq), 1e-30);

    // Trace PSNR follows the float iterate (clamped to the display range);
    // 8-bit quantization only applies to final reported numbers.
    double p = nan;
    if (reference) {
      std::vector<Plane> cplanes;
      cplanes.reserve(size_t(channels));
      for (int ch = 0; ch < channels; ++ch)
        cplanes.push_back(x[size_t(ch)].cwiseMax(0.0).cwiseMin(255.0));
      p = psnr(Image(std::move(cplanes)), *reference);
    }
    result.trace.push_back({iter, rel, p});
    result.iterations = iter;
    if (observer) observer(iter, z, x, u);
    if (rel < config.tol) break;
  }

  std::vector<Plane> out;
  out.reserve(size_t(channels));
  for (int ch = 0; ch < channels; ++ch)
    out.push_back(x[size_t(ch)].cwiseMax(0.0).cwiseMin(255.0));
  result.restored = Image(std::move(out));
  return result;
}

}  // namespace gscir
