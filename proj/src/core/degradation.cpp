#include "core/degradation.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>

#include "core/rng.hpp"

namespace gscir {

// ---------------------------------------------------------------- masks

MaskOperator::MaskOperator(Eigen::ArrayXXd mask) : mask_(std::move(mask)) {
  if (((mask_ != 0.0) && (mask_ != 1.0)).any())
    throw std::invalid_argument("MaskOperator: mask entries must be 0 or 1");
}

Eigen::VectorXd MaskOperator::apply(const Plane& x) const {
  if (x.rows() != mask_.rows() || x.cols() != mask_.cols())
    throw std::invalid_argument("MaskOperator: shape mismatch");
  Plane masked = x.array() * mask_;
  return Eigen::Map<const Eigen::VectorXd>(masked.data(), masked.size());
}

Plane MaskOperator::adjoint(const Eigen::VectorXd& y) const {
  if (y.size() != mask_.size()) throw std::invalid_argument("MaskOperator: shape mismatch");
  Plane img = Eigen::Map<const Plane>(y.data(), mask_.rows(), mask_.cols());
  return img.array() * mask_;
}

long MaskOperator::observed_count() const { return long(mask_.sum()); }

Eigen::ArrayXXd make_random_mask(int height, int width, double missing_fraction,
                                 uint64_t seed) {
  if (missing_fraction < 0.0 || missing_fraction >= 1.0)
    throw std::invalid_argument("make_random_mask: fraction must be in [0, 1)");
  long n = long(height) * long(width);
  long missing = std::llround(missing_fraction * double(n));
  Eigen::ArrayXXd mask = Eigen::ArrayXXd::Ones(height, width);
  Rng rng(seed);
  for (int idx : rng.sample_without_replacement(int(n), int(missing)))
    mask(idx / width, idx % width) = 0.0;
  return mask;
}

Eigen::ArrayXXd mask_from_image(const Image& mask_image) {
  const Plane& p = mask_image.channels() == 1 ? mask_image.plane(0)
                                              : to_grayscale(mask_image).plane(0);
  return (p.array() != 0.0).cast<double>();
}

// ---------------------------------------------------------------- blur

struct BlurOperator::FftPlans {
  fftw_plan fwd = nullptr, bwd = nullptr;
  std::vector<double> real_buf;
  std::vector<std::complex<double>> cplx_buf;
  ~FftPlans() {
    if (fwd) fftw_destroy_plan(fwd);
    if (bwd) fftw_destroy_plan(bwd);
  }
};

BlurOperator::BlurOperator(Eigen::MatrixXd kernel, int image_height, int image_width)
    : kernel_(std::move(kernel)), h_(image_height), w_(image_width) {
  if (h_ < 1 || w_ < 1) throw std::invalid_argument("BlurOperator: bad image size");
  if (kernel_.rows() > h_ || kernel_.cols() > w_)
    throw std::invalid_argument("BlurOperator: kernel larger than image");
  if (std::abs(kernel_.sum() - 1.0) > 1e-8)
    throw std::invalid_argument("BlurOperator: kernel must sum to 1");

  plans_ = std::make_unique<FftPlans>();
  plans_->real_buf.resize(size_t(h_) * size_t(w_));
  plans_->cplx_buf.resize(size_t(h_) * size_t(w_ / 2 + 1));
  plans_->fwd = fftw_plan_dft_r2c_2d(
      h_, w_, plans_->real_buf.data(),
      reinterpret_cast<fftw_complex*>(plans_->cplx_buf.data()), FFTW_ESTIMATE);
  plans_->bwd = fftw_plan_dft_c2r_2d(
      h_, w_, reinterpret_cast<fftw_complex*>(plans_->cplx_buf.data()),
      plans_->real_buf.data(), FFTW_ESTIMATE);

  // Transfer function of the kernel wrapped around the origin, anchored at
  // its center pixel.
  const int kh = int(kernel_.rows()), kw = int(kernel_.cols());
  const int cr = kh / 2, cc = kw / 2;
  std::fill(plans_->real_buf.begin(), plans_->real_buf.end(), 0.0);
  for (int r = 0; r < kh; ++r)
    for (int c = 0; c < kw; ++c) {
      int rr = ((r - cr) % h_ + h_) % h_;
      int cc2 = ((c - cc) % w_ + w_) % w_;
      plans_->real_buf[size_t(rr) * size_t(w_) + size_t(cc2)] += kernel_(r, c);
    }
  fftw_execute(plans_->fwd);
  transfer_.assign(plans_->cplx_buf.begin(), plans_->cplx_buf.end());
}

BlurOperator::~BlurOperator() = default;

Plane BlurOperator::convolve(const Plane& x, bool conjugate) const {
  if (x.rows() != h_ || x.cols() != w_)
    throw std::invalid_argument("BlurOperator: shape mismatch");
  std::lock_guard<std::mutex> lock(fft_mutex_);
  for (int r = 0; r < h_; ++r)
    for (int c = 0; c < w_; ++c) plans_->real_buf[size_t(r) * size_t(w_) + size_t(c)] = x(r, c);
  fftw_execute(plans_->fwd);
  for (size_t i = 0; i < transfer_.size(); ++i)
    plans_->cplx_buf[i] *= conjugate ? std::conj(transfer_[i]) : transfer_[i];
  fftw_execute(plans_->bwd);
  Plane out(h_, w_);
  const double scale = 1.0 / (double(h_) * double(w_));
  for (int r = 0; r < h_; ++r)
    for (int c = 0; c < w_; ++c) out(r, c) = plans_->real_buf[size_t(r) * size_t(w_) + size_t(c)] * scale;
  return out;
}

Eigen::VectorXd BlurOperator::apply(const Plane& x) const {
  Plane out = convolve(x, false);
  return Eigen::Map<const Eigen::VectorXd>(out.data(), out.size());
}

Plane BlurOperator::adjoint(const Eigen::VectorXd& y) const {
  Plane img = Eigen::Map<const Plane>(y.data(), h_, w_);
  return convolve(img, true);
}

Plane BlurOperator::quadratic_solve(const Plane& b, const Plane& q, double mu) const {
  if (b.rows() != h_ || b.cols() != w_ || q.rows() != h_ || q.cols() != w_)
    throw std::invalid_argument("BlurOperator: shape mismatch");
  std::lock_guard<std::mutex> lock(fft_mutex_);
  std::vector<std::complex<double>> bf(transfer_.size()), qf(transfer_.size());
  for (int r = 0; r < h_; ++r)
    for (int c = 0; c < w_; ++c) plans_->real_buf[size_t(r) * size_t(w_) + size_t(c)] = b(r, c);
  fftw_execute(plans_->fwd);
  bf = plans_->cplx_buf;
  for (int r = 0; r < h_; ++r)
    for (int c = 0; c < w_; ++c) plans_->real_buf[size_t(r) * size_t(w_) + size_t(c)] = q(r, c);
  fftw_execute(plans_->fwd);
  qf = plans_->cplx_buf;
  for (size_t i = 0; i < transfer_.size(); ++i) {
    double k2 = std::norm(transfer_[i]);
    plans_->cplx_buf[i] = (std::conj(transfer_[i]) * bf[i] + mu * qf[i]) / (k2 + mu);
  }
  fftw_execute(plans_->bwd);
  Plane out(h_, w_);
  const double scale = 1.0 / (double(h_) * double(w_));
  for (int r = 0; r < h_; ++r)
    for (int c = 0; c < w_; ++c) out(r, c) = plans_->real_buf[size_t(r) * size_t(w_) + size_t(c)] * scale;
  return out;
}

// ---------------------------------------------------------------- kernels

Eigen::MatrixXd make_uniform_kernel(int side) {
  if (side < 1 || side % 2 == 0)
    throw std::invalid_argument("make_uniform_kernel: side must be odd");
  return Eigen::MatrixXd::Constant(side, side, 1.0 / double(side * side));
}

Eigen::MatrixXd make_gaussian_kernel(int side, double sigma) {
  if (side < 1 || side % 2 == 0)
    throw std::invalid_argument("make_gaussian_kernel: side must be odd");
  if (sigma <= 0.0) throw std::invalid_argument("make_gaussian_kernel: sigma must be positive");
  Eigen::MatrixXd k(side, side);
  const int c = side / 2;
  for (int i = 0; i < side; ++i)
    for (int j = 0; j < side; ++j) {
      double di = i - c, dj = j - c;
      k(i, j) = std::exp(-(di * di + dj * dj) / (2.0 * sigma * sigma));
    }
  return k / k.sum();
}

Eigen::MatrixXd make_motion_kernel(int length, double angle_degrees) {
  if (length < 1) throw std::invalid_argument("make_motion_kernel: length must be >= 1");
  if (length == 1) return Eigen::MatrixXd::Constant(1, 1, 1.0);
  const double half = 0.5 * double(length - 1);
  const double phi = std::fmod(std::fmod(angle_degrees, 180.0) + 180.0, 180.0) * M_PI / 180.0;
  const double ux = std::cos(phi), uy = std::sin(phi);

  const int rad = int(std::ceil(half)) + 1;
  const int side = 2 * rad + 1;
  Eigen::MatrixXd k = Eigen::MatrixXd::Zero(side, side);
  for (int r = 0; r < side; ++r)
    for (int c = 0; c < side; ++c) {
      // y axis points up so positive angles rotate counter-clockwise
      double px = double(c - rad), py = double(rad - r);
      double s = px * ux + py * uy;                  // along-line coordinate
      double sc = std::clamp(s, -half, half);        // nearest segment point
      double dx = px - sc * ux, dy = py - sc * uy;
      double dist = std::hypot(dx, dy);
      k(r, c) = std::max(0.0, 1.0 - dist);
    }
  k /= k.sum();

  // Trim all-zero border rows/cols in pairs to keep the center centered.
  int top = 0, bottom = int(k.rows()) - 1;
  while (top < bottom && k.row(top).isZero(0.0) && k.row(bottom).isZero(0.0)) {
    ++top;
    --bottom;
  }
  int left = 0, right = int(k.cols()) - 1;
  while (left < right && k.col(left).isZero(0.0) && k.col(right).isZero(0.0)) {
    ++left;
    --right;
  }
  return k.block(top, left, bottom - top + 1, right - left + 1);
}

// ---------------------------------------------------------------- block CS

BlockCsOperator::BlockCsOperator(int block_side, double subrate, uint64_t seed,
                                 int image_height, int image_width)
    : block_(block_side), h_(image_height), w_(image_width), subrate_(subrate), seed_(seed) {
  if (block_ < 1) throw std::invalid_argument("BlockCsOperator: bad block size");
  if (subrate <= 0.0 || subrate > 1.0)
    throw std::invalid_argument("BlockCsOperator: subrate must be in (0, 1]");
  const int b2 = block_ * block_;
  const int m = int(std::llround(subrate * double(b2)));
  if (m < 1) throw std::invalid_argument("BlockCsOperator: zero measurement rows");
  padded_h_ = (h_ + block_ - 1) / block_ * block_;
  padded_w_ = (w_ + block_ - 1) / block_ * block_;

  // Seeded Gaussian matrix, rows orthonormalized through a thin QR of its
  // transpose. Serialization needs only (seed, block, subrate).
  Rng rng(seed);
  Eigen::MatrixXd g(b2, m);
  for (int c = 0; c < m; ++c)
    for (int r = 0; r < b2; ++r) g(r, c) = rng.normal();
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(b2, m);
  phi_ = q.transpose();
}

long BlockCsOperator::measurement_size() const {
  long blocks = long(padded_h_ / block_) * long(padded_w_ / block_);
  return blocks * phi_.rows();
}

Eigen::VectorXd BlockCsOperator::apply(const Plane& x) const {
  if (x.rows() != h_ || x.cols() != w_)
    throw std::invalid_argument("BlockCsOperator: shape mismatch");
  const int bh = padded_h_ / block_, bw = padded_w_ / block_;
  const int b2 = block_ * block_;
  Eigen::MatrixXd cols(b2, bh * bw);
  cols.setZero();
  for (int br = 0; br < bh; ++br)
    for (int bc = 0; bc < bw; ++bc) {
      int k = br * bw + bc;
      for (int c = 0; c < block_; ++c)
        for (int r = 0; r < block_; ++r) {
          int ir = br * block_ + r, ic = bc * block_ + c;
          cols(c * block_ + r, k) = (ir < h_ && ic < w_) ? x(ir, ic) : 0.0;
        }
    }
  Eigen::MatrixXd meas = phi_ * cols;  // M x blocks
  return Eigen::Map<const Eigen::VectorXd>(meas.data(), meas.size());
}

Plane BlockCsOperator::adjoint(const Eigen::VectorXd& y) const {
  if (y.size() != measurement_size())
    throw std::invalid_argument("BlockCsOperator: shape mismatch");
  const int bh = padded_h_ / block_, bw = padded_w_ / block_;
  const int m = int(phi_.rows());
  Eigen::Map<const Eigen::MatrixXd> meas(y.data(), m, bh * bw);
  Eigen::MatrixXd cols = phi_.transpose() * meas;
  Plane out = Plane::Zero(h_, w_);
  for (int br = 0; br < bh; ++br)
    for (int bc = 0; bc < bw; ++bc) {
      int k = br * bw + bc;
      for (int c = 0; c < block_; ++c)
        for (int r = 0; r < block_; ++r) {
          int ir = br * block_ + r, ic = bc * block_ + c;
          if (ir < h_ && ic < w_) out(ir, ic) = cols(c * block_ + r, k);
        }
    }
  return out;
}

// ---------------------------------------------------------------- noise

Image add_gaussian_noise(const Image& img, double sigma, uint64_t seed) {
  if (sigma < 0.0) throw std::invalid_argument("add_gaussian_noise: negative sigma");
  Rng rng(seed);
  std::vector<Plane> planes;
  planes.reserve(size_t(img.channels()));
  for (int ch = 0; ch < img.channels(); ++ch) {
    Plane p = img.plane(ch);
    for (int r = 0; r < p.rows(); ++r)
      for (int c = 0; c < p.cols(); ++c) p(r, c) += sigma * rng.normal();
    planes.push_back(std::move(p));
  }
  return Image(std::move(planes));
}

Image add_salt_pepper(const Image& img, double density, uint64_t seed) {
  if (density < 0.0 || density > 1.0)
    throw std::invalid_argument("add_salt_pepper: density must be in [0, 1]");
  const int h = img.height(), w = img.width();
  long n = long(h) * long(w);
  long corrupted = std::llround(density * double(n));
  Rng rng(seed);
  auto sites = rng.sample_without_replacement(int(n), int(corrupted));
  Image out = img;
  for (int idx : sites) {
    double v = rng.coin() ? 255.0 : 0.0;
    for (int ch = 0; ch < out.channels(); ++ch) out.at(idx / w, idx % w, ch) = v;
  }
  return out;
}

// ------------------------------------------------- adaptive median filter

namespace {

struct WindowStats {
  int min_v, max_v, med_v;
};

// Histogram over the clipped window; grows incrementally by rings.
class WindowHistogram {
 public:
  WindowHistogram(const Eigen::ArrayXXi& img, int r, int c) : img_(img), r_(r), c_(c) {}

  // Expands coverage to a (2*rad+1)^2 window clipped to the image.
  void grow_to(int rad) {
    for (int q = rad_ + 1; q <= rad; ++q) add_ring(q);
    rad_ = rad;
  }

  WindowStats stats() const {
    WindowStats s{};
    int i = 0;
    while (hist_[size_t(i)] == 0) ++i;
    s.min_v = i;
    i = 255;
    while (hist_[size_t(i)] == 0) --i;
    s.max_v = i;
    int target = (count_ - 1) / 2;  // lower median
    int acc = 0;
    for (int v = 0; v < 256; ++v) {
      acc += hist_[size_t(v)];
      if (acc > target) {
        s.med_v = v;
        break;
      }
    }
    return s;
  }

 private:
  void add_pixel(int r, int c) {
    if (r < 0 || c < 0 || r >= img_.rows() || c >= img_.cols()) return;
    ++hist_[size_t(img_(r, c))];
    ++count_;
  }
  void add_ring(int q) {
    if (q == 0) {
      add_pixel(r_, c_);
      return;
    }
    for (int c = c_ - q; c <= c_ + q; ++c) {
      add_pixel(r_ - q, c);
      add_pixel(r_ + q, c);
    }
    for (int r = r_ - q + 1; r <= r_ + q - 1; ++r) {
      add_pixel(r, c_ - q);
      add_pixel(r, c_ + q);
    }
  }

  const Eigen::ArrayXXi& img_;
  int r_, c_;
  int rad_ = -1;
  int count_ = 0;
  std::array<int, 256> hist_{};
};

}  // namespace

AdaptiveMedianResult adaptive_median_filter(const Plane& img, int max_window) {
  if (max_window < 3 || max_window % 2 == 0)
    throw std::invalid_argument("adaptive_median_filter: max_window must be odd and >= 3");
  const int h = int(img.rows()), w = int(img.cols());
  Eigen::ArrayXXi quant(h, w);
  for (int r = 0; r < h; ++r)
    for (int c = 0; c < w; ++c)
      quant(r, c) = int(std::nearbyint(std::clamp(img(r, c), 0.0, 255.0)));

  AdaptiveMedianResult out;
  out.filtered = img;
  out.clean_mask = Eigen::ArrayXXd::Ones(h, w);

  const int max_rad = max_window / 2;
  for (int r = 0; r < h; ++r)
    for (int c = 0; c < w; ++c) {
      WindowHistogram hist(quant, r, c);
      WindowStats s{};
      for (int rad = 1;; ++rad) {
        hist.grow_to(rad);
        s = hist.stats();
        if ((s.min_v < s.med_v && s.med_v < s.max_v) || rad == max_rad) break;
      }
      int v = quant(r, c);
      bool inside = s.min_v < v && v < s.max_v;
      bool extremal = v == 0 || v == 255;
      if (!inside && extremal) {
        out.clean_mask(r, c) = 0.0;
        out.filtered(r, c) = double(s.med_v);
      }
    }
  return out;
}

}  // namespace gscir
