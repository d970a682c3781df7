#pragma once

#include <Eigen/Dense>

namespace gscir {

// Rank relaxation families. "Weighted" variants share the same base
// penalty rho; the per-index weights come from the iterative reweighting,
// which turns the plain families into their weighted counterparts after
// the first pass.
enum class RelaxFamily {
  Nuclear,
  WeightedNuclear,
  Truncated,
  WeightedTruncated,
  SchattenP,
  WeightedSchattenP,
};

struct RelaxationSpec {
  RelaxFamily family = RelaxFamily::WeightedSchattenP;
  double p = 0.5;           // exponent for Schatten families, in (0, 1]
  int truncation_rank = 0;  // leading values exempt from shrinkage (truncated families)
  double epsilon = 0.1;     // caps the supergradient singularity at 0

  bool is_schatten() const {
    return family == RelaxFamily::SchattenP || family == RelaxFamily::WeightedSchattenP;
  }
  bool is_truncated() const {
    return family == RelaxFamily::Truncated || family == RelaxFamily::WeightedTruncated;
  }
};

// Shrunken singular values paired with the weights used to produce them.
// values nonincreasing, weights nondecreasing, equal lengths.
struct SingularSpectrum {
  Eigen::VectorXd values;
  Eigen::VectorXd weights;
};

// rho(sigma): sigma for nuclear families, sigma^p for Schatten families.
// Truncated families are index-dependent; callers pass the effective
// penalty per index (zero weight on exempt indices), so here they reduce
// to the nuclear rho.
double rho_eval(const RelaxationSpec& spec, double sigma);

// Supergradient of rho. For Schatten families p*sigma^(p-1), with the
// value at sigma = 0 capped to p*epsilon^(p-1); 1 for nuclear families.
double rho_supergradient(const RelaxationSpec& spec, double sigma);

// w_i = drho(rho(sigma_i)) evaluated on a nonincreasing spectrum; the
// result is nondecreasing. Truncated families force 0 on the
// truncation_rank largest values.
Eigen::VectorXd update_weights(const RelaxationSpec& spec, const Eigen::VectorXd& values);

// Global minimizer over sigma >= 0 of
//   0.5*(sigma - delta)^2 + xi*rho(sigma).
// Closed forms for the nuclear families and p in {1/2, 2/3, 1};
// a bracketed grid/golden-section search for any other p.
double scalar_prox(const RelaxationSpec& spec, double xi, double delta);

// Closed-form minimizers of (x - delta)^2 + lam * x^p over x >= 0 for
// p = 1/2 and p = 2/3. scalar_prox maps its half-scaled objective onto
// these with lam = penalty_scale * xi; the shipped scale is 2, selected
// against the brute-force oracle and frozen by a regression test
// (threshold_scale exists for that mutation test only).
double half_threshold_op(double delta, double lam, double threshold_scale = 1.0);
double two_thirds_threshold_op(double delta, double lam, double threshold_scale = 1.0);
inline constexpr double kProxPenaltyScale = 2.0;

// Weighted singular value thresholding: SVD of y, element-wise
// scalar_prox with xi_i = lambda * weights_i, reconstruction.
// weights must be nondecreasing with length min(rows, cols).
struct SvProxResult {
  Eigen::MatrixXd x;
  SingularSpectrum spectrum;
};
SvProxResult weighted_sv_prox(const Eigen::MatrixXd& y, const Eigen::VectorXd& weights,
                              const RelaxationSpec& spec, double lambda);

// Iteratively-reweighted group denoiser: unit initial weights, then
// inner_iters rounds of thresholding with weights recomputed from the
// previous iterate's spectrum. Returns the final iterate; the spectrum
// holds the shrunken singular values (the group's sparse code) and the
// weights used in the last round.
SvProxResult denoise_group(const Eigen::MatrixXd& y, double lambda,
                           const RelaxationSpec& spec, int inner_iters);

}  // namespace gscir
