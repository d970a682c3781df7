#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <memory>
#include <mutex>
#include <vector>

#include "core/image.hpp"

namespace gscir {

// Forward operator A acting on one image channel. apply maps a plane to a
// flat measurement vector; adjoint is the exact transpose map.
class LinearOperator {
 public:
  enum class Kind { Mask, Blur, BlockCS };

  virtual ~LinearOperator() = default;
  virtual Kind kind() const = 0;
  virtual int height() const = 0;
  virtual int width() const = 0;
  virtual long measurement_size() const = 0;
  virtual Eigen::VectorXd apply(const Plane& x) const = 0;
  virtual Plane adjoint(const Eigen::VectorXd& y) const = 0;
};

// Pixel mask: apply zeroes unobserved pixels (measurements keep image
// shape), adjoint equals apply.
class MaskOperator final : public LinearOperator {
 public:
  MaskOperator(Eigen::ArrayXXd mask);  // entries 0 (missing) or 1 (observed)

  Kind kind() const override { return Kind::Mask; }
  int height() const override { return int(mask_.rows()); }
  int width() const override { return int(mask_.cols()); }
  long measurement_size() const override { return mask_.size(); }
  Eigen::VectorXd apply(const Plane& x) const override;
  Plane adjoint(const Eigen::VectorXd& y) const override;

  const Eigen::ArrayXXd& mask() const { return mask_; }
  long observed_count() const;

 private:
  Eigen::ArrayXXd mask_;
};

// Circular 2-D convolution with a normalized kernel; adjoint is
// correlation (conjugate transfer function). Exact frequency-domain
// solves for the data subproblem use the cached transfer function.
class BlurOperator final : public LinearOperator {
 public:
  BlurOperator(Eigen::MatrixXd kernel, int image_height, int image_width);
  ~BlurOperator() override;

  Kind kind() const override { return Kind::Blur; }
  int height() const override { return h_; }
  int width() const override { return w_; }
  long measurement_size() const override { return long(h_) * long(w_); }
  Eigen::VectorXd apply(const Plane& x) const override;
  Plane adjoint(const Eigen::VectorXd& y) const override;

  const Eigen::MatrixXd& kernel() const { return kernel_; }
  // Solves  min_z 0.5*|b - A z|^2 + (mu/2)*|z - q|^2  exactly.
  Plane quadratic_solve(const Plane& b, const Plane& q, double mu) const;

 private:
  Plane convolve(const Plane& x, bool conjugate) const;

  Eigen::MatrixXd kernel_;
  int h_, w_;
  std::vector<std::complex<double>> transfer_;  // r2c layout, h x (w/2+1)
  struct FftPlans;
  std::unique_ptr<FftPlans> plans_;
  mutable std::mutex fft_mutex_;
};

// Block-based random projection: one seeded Gaussian matrix with
// orthonormal rows shared across all blocks. Images whose dimensions are
// not multiples of block_side are zero-padded (adjoint crops), keeping
// the operator pair exactly adjoint.
class BlockCsOperator final : public LinearOperator {
 public:
  BlockCsOperator(int block_side, double subrate, uint64_t seed, int image_height,
                  int image_width);

  Kind kind() const override { return Kind::BlockCS; }
  int height() const override { return h_; }
  int width() const override { return w_; }
  long measurement_size() const override;
  Eigen::VectorXd apply(const Plane& x) const override;
  Plane adjoint(const Eigen::VectorXd& y) const override;

  int block_side() const { return block_; }
  int rows_per_block() const { return int(phi_.rows()); }
  double subrate() const { return subrate_; }
  uint64_t seed() const { return seed_; }
  const Eigen::MatrixXd& projection() const { return phi_; }

 private:
  int block_, h_, w_, padded_h_, padded_w_;
  double subrate_;
  uint64_t seed_;
  Eigen::MatrixXd phi_;  // M x block^2, orthonormal rows
};

// Kernel constructors.
Eigen::MatrixXd make_uniform_kernel(int side);
Eigen::MatrixXd make_gaussian_kernel(int side, double sigma);
Eigen::MatrixXd make_motion_kernel(int length, double angle_degrees);

// Mask constructors; 1 = observed, 0 = missing.
Eigen::ArrayXXd make_random_mask(int height, int width, double missing_fraction,
                                 uint64_t seed);
// Mask image file: pixel value 0 means missing, anything else observed.
Eigen::ArrayXXd mask_from_image(const Image& mask_image);

// Noise synthesis.
Image add_gaussian_noise(const Image& img, double sigma, uint64_t seed);
// Sets round(density * H * W) distinct pixel sites to 0 or 255 (fair coin
// per site, all channels of a site get the same value).
Image add_salt_pepper(const Image& img, double density, uint64_t seed);

// Adaptive median filter: at each pixel an odd window grows from 3 until
// its median is strictly between its min and max (or max_window is hit).
// A pixel is flagged impulse only when it is not strictly inside the
// final window's (min, max) AND its value is extremal (0 or 255); flagged
// pixels are replaced by the window median. The flag grid doubles as the
// observed-pixel mask (1 = clean).
struct AdaptiveMedianResult {
  Plane filtered;
  Eigen::ArrayXXd clean_mask;
};
AdaptiveMedianResult adaptive_median_filter(const Plane& img, int max_window = 39);

}  // namespace gscir
