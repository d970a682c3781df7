#include "core/shrinkage.hpp"

#include <cmath>
#include <stdexcept>

#include "core/svd.hpp"

namespace gscir {

namespace {

constexpr double kTwoThirds = 2.0 / 3.0;

bool near(double a, double b) { return std::abs(a - b) < 1e-9; }

double soft_threshold(double delta, double xi) { return std::max(delta - xi, 0.0); }

// Grid-plus-golden-section minimizer of f(s) = 0.5*(s-delta)^2 + xi*s^p
// on [0, delta]. The objective has at most one interior local minimum,
// so refining around the best coarse cell and comparing with s = 0 finds
// the global minimizer.
double prox_search(double delta, double xi, double p) {
  if (delta <= 0.0) return 0.0;
  auto f = [&](double s) { return 0.5 * (s - delta) * (s - delta) + xi * std::pow(s, p); };
  const int cells = 2000;
  const double step = delta / cells;
  double best_s = 0.0, best_f = f(0.0);
  for (int i = 1; i <= cells; ++i) {
    double s = i * step;
    double v = f(s);
    if (v < best_f) {
      best_f = v;
      best_s = s;
    }
  }
  if (best_s == 0.0) return 0.0;
  double lo = std::max(0.0, best_s - 2 * step), hi = std::min(delta, best_s + 2 * step);
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = lo, b = hi;
  double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while (b - a > 1e-12 * (1.0 + delta)) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - gr * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + gr * (b - a);
      f2 = f(x2);
    }
  }
  double s = 0.5 * (a + b);
  return f(s) <= f(0.0) ? s : 0.0;
}

}  // namespace

double half_threshold_op(double delta, double lam, double threshold_scale) {
  if (lam <= 0.0) return std::max(delta, 0.0);
  double ad = std::abs(delta);
  double t = threshold_scale * (std::cbrt(54.0) / 4.0) * std::pow(lam, kTwoThirds);
  if (ad <= t) return 0.0;
  double phi = std::acos((lam / 8.0) * std::pow(ad / 3.0, -1.5));
  double v = kTwoThirds * ad * (1.0 + std::cos(2.0 * M_PI / 3.0 - kTwoThirds * phi));
  return delta >= 0.0 ? v : -v;
}

double two_thirds_threshold_op(double delta, double lam, double threshold_scale) {
  if (lam <= 0.0) return std::max(delta, 0.0);
  double ad = std::abs(delta);
  double t = threshold_scale * (2.0 * std::pow(3.0, 0.25) / 3.0) * std::pow(lam, 0.75);
  if (ad <= t) return 0.0;
  double a = (27.0 / 16.0) * std::pow(lam, -1.5) * ad * ad;
  double theta = (2.0 / std::sqrt(3.0)) * std::pow(lam, 0.25) *
                 std::sqrt(std::cosh(std::acosh(a) / 3.0));
  double root = std::sqrt(std::max(2.0 * ad / theta - theta * theta, 0.0));
  double v = std::pow(0.5 * (theta + root), 3.0);
  return delta >= 0.0 ? v : -v;
}

double rho_eval(const RelaxationSpec& spec, double sigma) {
  if (sigma < 0.0) throw std::invalid_argument("rho_eval: negative sigma");
  if (spec.is_schatten()) return std::pow(sigma, spec.p);
  return sigma;
}

double rho_supergradient(const RelaxationSpec& spec, double sigma) {
  if (sigma < 0.0) throw std::invalid_argument("rho_supergradient: negative sigma");
  if (!spec.is_schatten()) return 1.0;
  if (spec.p == 1.0) return 1.0;
  if (sigma == 0.0) return spec.p * std::pow(spec.epsilon, spec.p - 1.0);
  return spec.p * std::pow(sigma, spec.p - 1.0);
}

Eigen::VectorXd update_weights(const RelaxationSpec& spec, const Eigen::VectorXd& values) {
  Eigen::VectorXd w(values.size());
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    if (spec.is_truncated() && i < spec.truncation_rank)
      w[i] = 0.0;
    else
      w[i] = rho_supergradient(spec, rho_eval(spec, values[i]));
  }
  return w;
}

double scalar_prox(const RelaxationSpec& spec, double xi, double delta) {
  if (xi < 0.0 || delta < 0.0) throw std::invalid_argument("scalar_prox: negative argument");
  if (xi == 0.0) return delta;
  if (!spec.is_schatten() || spec.p == 1.0) return soft_threshold(delta, xi);
  if (near(spec.p, 0.5)) return half_threshold_op(delta, kProxPenaltyScale * xi);
  if (near(spec.p, kTwoThirds)) return two_thirds_threshold_op(delta, kProxPenaltyScale * xi);
  return prox_search(delta, xi, spec.p);
}

SvProxResult weighted_sv_prox(const Eigen::MatrixXd& y, const Eigen::VectorXd& weights,
                              const RelaxationSpec& spec, double lambda) {
  const Eigen::Index r = std::min(y.rows(), y.cols());
  if (weights.size() != r)
    throw std::invalid_argument("weighted_sv_prox: weights length must be min(rows, cols)");
  ThinSvd svd = thin_svd(y);
  SvProxResult out;
  out.spectrum.values.resize(r);
  for (Eigen::Index i = 0; i < r; ++i)
    out.spectrum.values[i] = scalar_prox(spec, lambda * weights[i], svd.sigma[i]);
  out.spectrum.weights = weights;
  out.x = svd.U * out.spectrum.values.asDiagonal() * svd.V.transpose();
  return out;
}

SvProxResult denoise_group(const Eigen::MatrixXd& y, double lambda,
                           const RelaxationSpec& spec, int inner_iters) {
  if (inner_iters < 1) throw std::invalid_argument("denoise_group: inner_iters must be >= 1");
  const Eigen::Index r = std::min(y.rows(), y.cols());
  ThinSvd svd = thin_svd(y);  // U, V stay fixed across the reweighting
  Eigen::VectorXd w = Eigen::VectorXd::Ones(r);
  Eigen::VectorXd shrunk(r);
  for (int t = 0; t < inner_iters; ++t) {
    for (Eigen::Index i = 0; i < r; ++i)
      shrunk[i] = scalar_prox(spec, lambda * w[i], svd.sigma[i]);
    if (t + 1 < inner_iters) w = update_weights(spec, shrunk);
  }

  // Values are nonincreasing, so the surviving components form a prefix.
  Eigen::Index rank = r;
  while (rank > 0 && shrunk[rank - 1] == 0.0) --rank;
  SvProxResult out;
  if (rank == 0)
    out.x = Eigen::MatrixXd::Zero(y.rows(), y.cols());
  else
    out.x = svd.U.leftCols(rank) * shrunk.head(rank).asDiagonal() *
            svd.V.leftCols(rank).transpose();
  out.spectrum.values = std::move(shrunk);
  out.spectrum.weights = std::move(w);
  return out;
}

}  // namespace gscir
