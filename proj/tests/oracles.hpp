#pragma once

// Test-only reference implementations, independent of the library's
// closed-form code paths.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

namespace oracles {

// Grid-search minimizer of f(s) = 0.5*(s-delta)^2 + xi*s^p over s >= 0
// with an effective step of `fine`. f has at most one interior local
// minimum (f' = s - delta + xi*p*s^(p-1) has at most two zeros), so the
// fine-grid argmin is either s = 0 or lies within one coarse cell of the
// coarse argmin; refining that bracket at the fine step and comparing
// against f(0) reproduces the full fine-grid search.
inline double prox_grid_search(double delta, double xi, double p, double fine = 1e-5) {
  if (delta <= 0.0) return 0.0;
  auto f = [&](double s) { return 0.5 * (s - delta) * (s - delta) + xi * std::pow(s, p); };
  const int cells = 2000;
  const double coarse = delta / cells;
  double best_s = 0.0, best_f = f(0.0);
  for (int i = 1; i <= cells; ++i) {
    double s = i * coarse;
    if (double v = f(s); v < best_f) {
      best_f = v;
      best_s = s;
    }
  }
  double lo = std::max(0.0, best_s - 2.0 * coarse);
  double hi = std::min(delta, best_s + 2.0 * coarse);
  long steps = lround((hi - lo) / fine);
  for (long i = 0; i <= steps; ++i) {
    double s = lo + double(i) * fine;
    if (double v = f(s); v < best_f) {
      best_f = v;
      best_s = s;
    }
  }
  return best_s;
}

inline double prox_objective(double s, double delta, double xi, double p) {
  return 0.5 * (s - delta) * (s - delta) + xi * std::pow(s, p);
}

// Classical singular value soft-thresholding via Eigen's own SVD; used as
// the independent route against the LAPACK-based implementation.
inline Eigen::MatrixXd svt_soft_reference(const Eigen::MatrixXd& y, double threshold) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(y, Eigen::ComputeThinU | Eigen::ComputeThinV);
  Eigen::VectorXd s = svd.singularValues();
  for (Eigen::Index i = 0; i < s.size(); ++i) s[i] = std::max(s[i] - threshold, 0.0);
  return svd.matrixU() * s.asDiagonal() * svd.matrixV().transpose();
}

// Brute-force k nearest patches by squared distance, candidates scanned
// in a caller-chosen order; ties keep the earlier row-major scan index.
struct BruteMatch {
  double dist;
  int scan;
  int r, c;
};
inline std::vector<BruteMatch> brute_force_matches(
    const Eigen::MatrixXd& img, int ref_r, int ref_c, int side, int radius,
    bool reverse_scan = false) {
  const int h = int(img.rows()), w = int(img.cols());
  const int r_lo = std::max(0, ref_r - radius), r_hi = std::min(h - side, ref_r + radius);
  const int c_lo = std::max(0, ref_c - radius), c_hi = std::min(w - side, ref_c + radius);
  std::vector<BruteMatch> all;
  int scan = 0;
  for (int r = r_lo; r <= r_hi; ++r)
    for (int c = c_lo; c <= c_hi; ++c, ++scan) {
      if (r == ref_r && c == ref_c) continue;
      double d = (img.block(r, c, side, side) - img.block(ref_r, ref_c, side, side))
                     .squaredNorm();
      all.push_back({d, scan, r, c});
    }
  if (reverse_scan) std::reverse(all.begin(), all.end());
  std::stable_sort(all.begin(), all.end(),
                   [](const BruteMatch& a, const BruteMatch& b) { return a.dist < b.dist; });
  return all;
}

}  // namespace oracles
