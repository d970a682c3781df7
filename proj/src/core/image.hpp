#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace gscir {

// Single image channel, H x W intensities. Values are nominally in
// [0, 255] but intermediate solver states may leave that range.
using Plane = Eigen::MatrixXd;

class Image {
 public:
  Image() = default;
  Image(int height, int width, int channels, double fill = 0.0);
  explicit Image(Plane plane);
  Image(std::vector<Plane> planes);

  int height() const { return planes_.empty() ? 0 : int(planes_[0].rows()); }
  int width() const { return planes_.empty() ? 0 : int(planes_[0].cols()); }
  int channels() const { return int(planes_.size()); }
  bool empty() const { return planes_.empty(); }

  Plane& plane(int ch) { return planes_[size_t(ch)]; }
  const Plane& plane(int ch) const { return planes_[size_t(ch)]; }

  double& at(int r, int c, int ch = 0) { return planes_[size_t(ch)](r, c); }
  double at(int r, int c, int ch = 0) const { return planes_[size_t(ch)](r, c); }

  bool all_finite() const;
  bool same_shape(const Image& other) const;

 private:
  std::vector<Plane> planes_;
};

// Clamp to [0,255] and round half-to-even, still stored as doubles.
Image quantize_u8(const Image& img);
Plane quantize_u8(const Plane& p);

// Rec.601 luma; identity for single-channel input.
Image to_grayscale(const Image& img);

// 10*log10(255^2 / MSE), MSE over all pixels and channels.
// Identical inputs return +infinity. Throws on shape mismatch.
double psnr(const Image& x, const Image& reference);
double psnr(const Plane& x, const Plane& reference);

// File I/O. Format chosen by extension: .pgm/.ppm/.pnm or .png.
// Saving quantizes to 8 bits (clamp + round half-to-even).
Image load_image(const std::string& path);
void save_image(const Image& img, const std::string& path);

// Implemented in pnm_io.cpp / png_io.cpp.
Image load_pnm(const std::string& path);
void save_pnm(const Image& img, const std::string& path);
Image load_png(const std::string& path);
void save_png(const Image& img, const std::string& path);

// Test-image manifest: tab-separated lines of
//   name  path  height  width  channels
// with '#' comments. Paths are relative to the manifest's directory.
struct ManifestEntry {
  std::string name;
  std::string path;
  int height;
  int width;
  int channels;
};
std::vector<ManifestEntry> load_manifest(const std::string& path);

// Looks the name up and loads its image, checking the recorded shape.
Image load_manifest_image(const std::vector<ManifestEntry>& manifest,
                          const std::string& name);

}  // namespace gscir
