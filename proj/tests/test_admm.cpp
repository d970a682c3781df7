#include <doctest.h>

#include <cmath>

#include "core/admm.hpp"
#include "core/rng.hpp"
#include "core/tasks.hpp"

using namespace gscir;

namespace {

Plane random_plane(int h, int w, uint64_t seed, double lo = 0.0, double hi = 255.0) {
  Rng rng(seed);
  Plane p(h, w);
  for (int r = 0; r < h; ++r)
    for (int c = 0; c < w; ++c) p(r, c) = lo + (hi - lo) * rng.uniform();
  return p;
}

Plane structured_plane(int h, int w) {
  Plane p(h, w);
  for (int r = 0; r < h; ++r)
    for (int c = 0; c < w; ++c)
      p(r, c) = 100.0 + 80.0 * std::sin(r * 0.17) + (c > w / 2 ? 50.0 : 0.0);
  return p;
}

AdmmConfig small_config(double mu, double lambda) {
  AdmmConfig cfg;
  cfg.mu = mu;
  cfg.lambda = lambda;
  cfg.max_outer_iters = 12;
  cfg.tol = 1e-7;
  cfg.denoiser.geom.patch_side = 6;
  cfg.denoiser.geom.stride = 3;
  cfg.denoiser.geom.group_size = 12;
  cfg.denoiser.geom.search_radius = 8;
  cfg.denoiser.relax.family = RelaxFamily::WeightedSchattenP;
  cfg.denoiser.relax.p = 0.5;
  cfg.denoiser.inner_iters = 2;
  cfg.denoiser.threads = 1;
  return cfg;
}

}  // namespace

TEST_CASE("mask z-update") {
  Eigen::ArrayXXd mask = Eigen::ArrayXXd::Zero(2, 2);
  mask(0, 0) = 1.0;
  MaskOperator op(mask);
  Plane b(2, 2), q(2, 2);
  b << 100.0, 0.0, 0.0, 0.0;
  q << 50.0, 7.0, -3.0, 12.0;
  Eigen::VectorXd bv = Eigen::Map<const Eigen::VectorXd>(b.data(), 4);

  Plane z = z_update_mask(bv, op, q, 1.0);
  CHECK(z(0, 0) == doctest::Approx(75.0));  // (100 + 50) / 2
  CHECK(z(0, 1) == doctest::Approx(7.0));   // unobserved: exactly q
  CHECK(z(1, 0) == doctest::Approx(-3.0));
  CHECK(z(1, 1) == doctest::Approx(12.0));

  // observed pixels approach q like 1/mu
  Plane z1 = z_update_mask(bv, op, q, 1e3);
  Plane z2 = z_update_mask(bv, op, q, 1e6);
  CHECK(std::abs(z1(0, 0) - q(0, 0)) == doctest::Approx(1e3 * std::abs(z2(0, 0) - q(0, 0)))
                                            .epsilon(1e-2));
}

TEST_CASE("blur z-update") {
  const int n = 32;
  SUBCASE("delta kernel reduces to the scalar blend") {
    Eigen::MatrixXd delta = Eigen::MatrixXd::Zero(3, 3);
    delta(1, 1) = 1.0;
    BlurOperator op(delta, n, n);
    Plane b = random_plane(n, n, 3), q = random_plane(n, n, 5);
    Eigen::VectorXd bv = Eigen::Map<const Eigen::VectorXd>(b.data(), b.size());
    double mu = 0.7;
    Plane z = z_update_blur(bv, op, q, mu);
    Plane expect = (b + mu * q) / (1.0 + mu);
    CHECK((z - expect).cwiseAbs().maxCoeff() <= 1e-10);
  }
  SUBCASE("the solve zeroes the quadratic gradient") {
    BlurOperator op(make_uniform_kernel(9), n, n);
    Plane b = random_plane(n, n, 7), q = random_plane(n, n, 9);
    Eigen::VectorXd bv = Eigen::Map<const Eigen::VectorXd>(b.data(), b.size());
    double mu = 0.05;
    Plane z = z_update_blur(bv, op, q, mu);
    Eigen::VectorXd grad_vec = op.apply(op.adjoint(op.apply(z)) - op.adjoint(bv).eval());
    Plane grad = op.adjoint(op.apply(z) - bv) + mu * (z - q);
    CHECK(grad.norm() <= 1e-6 * (1.0 + bv.norm()));
    (void)grad_vec;
  }
  SUBCASE("constant planes solve the DC equation") {
    BlurOperator op(make_uniform_kernel(3), n, n);
    Plane b = Plane::Constant(n, n, 120.0), q = Plane::Constant(n, n, 30.0);
    Eigen::VectorXd bv = Eigen::Map<const Eigen::VectorXd>(b.data(), b.size());
    double mu = 0.25;
    Plane z = z_update_blur(bv, op, q, mu);
    double expect = (120.0 + mu * 30.0) / (1.0 + mu);
    CHECK((z.array() - expect).abs().maxCoeff() <= 1e-9);
  }
}

TEST_CASE("cs z-update") {
  SUBCASE("an optimal point is a fixed point") {
    BlockCsOperator op(4, 1.0, 3, 8, 8);  // square orthonormal: exactly invertible
    Plane zstar = random_plane(8, 8, 11);
    Eigen::VectorXd b = op.apply(zstar);
    Plane z = z_update_cs(b, op, zstar, 0.5, 5, zstar);
    CHECK((z - zstar).cwiseAbs().maxCoeff() <= 1e-10);
  }
  SUBCASE("one exact-line-search step from zero reaches the adjoint solution") {
    // 4x16 single-block toy with orthonormal rows: d = -A'b, Ad = -b,
    // eta = 1, so z becomes A'b after one step.
    BlockCsOperator op(4, 0.25, 7, 4, 4);
    REQUIRE(op.rows_per_block() == 4);
    Plane x = random_plane(4, 4, 13);
    Eigen::VectorXd b = op.apply(x);
    Plane z0 = Plane::Zero(4, 4);
    Plane z = z_update_cs(b, op, z0, 0.0, 1, z0);
    Plane expect = op.adjoint(b);
    CHECK((z - expect).cwiseAbs().maxCoeff() <= 1e-10);
  }
  SUBCASE("the data objective strictly decreases until optimal") {
    BlockCsOperator op(8, 0.4, 5, 16, 16);
    Plane truth = random_plane(16, 16, 17);
    Eigen::VectorXd b = op.apply(truth);
    Plane q = random_plane(16, 16, 19);
    double mu = 0.1;
    auto objective = [&](const Plane& z) {
      return 0.5 * (op.apply(z) - b).squaredNorm() + 0.5 * mu * (z - q).squaredNorm();
    };
    Plane z = Plane::Zero(16, 16);
    double prev = objective(z);
    for (int s = 0; s < 10; ++s) {
      z = z_update_cs(b, op, q, mu, 1, z);
      double now = objective(z);
      CHECK(now < prev);
      prev = now;
    }
  }
}

TEST_CASE("restore on a fully observed mask reproduces the input") {
  Plane img = structured_plane(40, 40);
  MaskOperator op(Eigen::ArrayXXd::Ones(40, 40));
  ChannelProblem prob;
  prob.op = &op;
  prob.b = op.apply(img);
  prob.z0 = img;
  AdmmConfig cfg = small_config(1.0, 0.005);
  cfg.max_outer_iters = 30;
  cfg.tol = 1e-5;
  auto res = restore({prob}, cfg);
  CHECK(psnr(quantize_u8(res.restored.plane(0)), img) > 48.0);  // within ~1 level
}

TEST_CASE("multiplier update identity holds exactly") {
  Plane img = structured_plane(32, 32);
  auto mask = make_random_mask(32, 32, 0.3, 3);
  MaskOperator op(mask);
  ChannelProblem prob;
  prob.op = &op;
  prob.b = op.apply(img);
  prob.z0 = img;
  AdmmConfig cfg = small_config(0.05, 0.05);
  cfg.max_outer_iters = 6;

  std::vector<Plane> prev_u{Plane::Zero(32, 32)};
  int checked = 0;
  auto observer = [&](int, const std::vector<Plane>& z, const std::vector<Plane>& x,
                      const std::vector<Plane>& u) {
    Plane lhs = u[0] - prev_u[0];
    Plane rhs = x[0] - z[0];
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() == 0.0);
    prev_u[0] = u[0];
    ++checked;
  };
  restore({prob}, cfg, nullptr, observer);
  CHECK(checked == 6);
}

TEST_CASE("restore is deterministic and improves PSNR on inpainting") {
  Image clean(structured_plane(48, 48));
  TaskOptions opt;
  opt.kind = TaskKind::Inpaint;
  opt.missing = 0.4;
  opt.p = 0.5;
  opt.max_outer_iters = 25;
  opt.patch_side = 6;
  opt.stride = 3;
  opt.group_size = 12;
  opt.seed = 7;
  opt.threads = 2;

  TaskResult a = run_task(opt, clean);
  TaskResult b = run_task(opt, clean);
  CHECK((a.restored.plane(0) - b.restored.plane(0)).cwiseAbs().maxCoeff() == 0.0);
  CHECK(a.psnr_out > a.psnr_in);
  CHECK(a.iterations == b.iterations);
  REQUIRE(a.trace.size() == size_t(a.iterations));
  CHECK(a.trace.front().rel_change > a.trace.back().rel_change);
}

TEST_CASE("non-finite observations abort with a diagnostic") {
  Plane img = structured_plane(24, 24);
  MaskOperator op(Eigen::ArrayXXd::Ones(24, 24));
  ChannelProblem prob;
  prob.op = &op;
  prob.b = op.apply(img);
  prob.b[5] = std::numeric_limits<double>::quiet_NaN();
  prob.z0 = img;
  AdmmConfig cfg = small_config(0.1, 0.05);
  CHECK_THROWS_WITH_AS(restore({prob}, cfg), doctest::Contains("iteration 1"),
                       std::runtime_error);
}

TEST_CASE("task parameter tables resolve and can be overridden") {
  CHECK(default_params(TaskKind::CS, 0.3, 0.5).mu == doctest::Approx(5e-3));
  CHECK(default_params(TaskKind::CS, 0.3, 0.5).lambda == doctest::Approx(0.01));
  CHECK(default_params(TaskKind::CS, 0.1, 2.0 / 3.0).lambda == doctest::Approx(0.04));
  CHECK(default_params(TaskKind::Inpaint, 0.5, 0.5).mu == doctest::Approx(1e-3));
  CHECK(default_params(TaskKind::SPN, 0.3, 0.5).lambda == doctest::Approx(0.15));
  CHECK(default_params(TaskKind::SPN, 0.8, 2.0 / 3.0).mu == doctest::Approx(2e-2));
  CHECK(deblur_params("uniform", 0.5).lambda == doctest::Approx(0.6));
  CHECK(deblur_params("gaussian", 2.0 / 3.0).mu == doctest::Approx(1.5e-2));
  CHECK(deblur_params("motion", 0.5).lambda == doctest::Approx(0.25));
  // nearest-column resolution
  CHECK(default_params(TaskKind::Inpaint, 0.55, 0.5).lambda == doctest::Approx(0.01));
  // no tabulated values for the nuclear exponent
  CHECK_THROWS_AS(default_params(TaskKind::CS, 0.3, 1.0), std::invalid_argument);
}

TEST_CASE("cs measurements round-trip through their file format") {
  Plane img = structured_plane(16, 16);
  CsMeasurements m;
  m.height = 16;
  m.width = 16;
  m.channels = 1;
  m.block_side = 8;
  m.subrate = 0.5;
  m.seed = 23;
  BlockCsOperator op(m.block_side, m.subrate, m.seed, 16, 16);
  m.b.push_back(op.apply(img));
  std::string path = "/tmp/gscir_test_meas.csm";
  save_cs_measurements(m, path);
  CsMeasurements back = load_cs_measurements(path);
  CHECK(back.height == 16);
  CHECK(back.block_side == 8);
  CHECK(back.subrate == doctest::Approx(0.5));
  CHECK(back.seed == 23);
  REQUIRE(back.b.size() == 1);
  CHECK((back.b[0] - m.b[0]).cwiseAbs().maxCoeff() <= 1e-12);
  std::remove(path.c_str());
}
