#include "core/image.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace gscir {

Image::Image(int height, int width, int channels, double fill) {
  if (height < 1 || width < 1 || channels < 1)
    throw std::invalid_argument("Image: dimensions must be positive");
  planes_.assign(size_t(channels), Plane::Constant(height, width, fill));
}

Image::Image(Plane plane) { planes_.push_back(std::move(plane)); }

Image::Image(std::vector<Plane> planes) : planes_(std::move(planes)) {
  for (const auto& p : planes_)
    if (p.rows() != planes_[0].rows() || p.cols() != planes_[0].cols())
      throw std::invalid_argument("Image: channel shapes differ");
}

bool Image::all_finite() const {
  for (const auto& p : planes_)
    if (!p.allFinite()) return false;
  return true;
}

bool Image::same_shape(const Image& other) const {
  return height() == other.height() && width() == other.width() &&
         channels() == other.channels();
}

Plane quantize_u8(const Plane& p) {
  return p.unaryExpr([](double v) {
    return std::nearbyint(std::min(255.0, std::max(0.0, v)));
  });
}

Image quantize_u8(const Image& img) {
  std::vector<Plane> out;
  out.reserve(size_t(img.channels()));
  for (int ch = 0; ch < img.channels(); ++ch) out.push_back(quantize_u8(img.plane(ch)));
  return Image(std::move(out));
}

Image to_grayscale(const Image& img) {
  if (img.channels() == 1) return img;
  if (img.channels() != 3)
    throw std::invalid_argument("to_grayscale: expected 1 or 3 channels");
  Plane g = 0.299 * img.plane(0) + 0.587 * img.plane(1) + 0.114 * img.plane(2);
  return Image(std::move(g));
}

double psnr(const Plane& x, const Plane& reference) {
  if (x.rows() != reference.rows() || x.cols() != reference.cols())
    throw std::invalid_argument("psnr: shape mismatch");
  double mse = (x - reference).squaredNorm() / double(x.size());
  if (mse == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(255.0 * 255.0 / mse);
}

double psnr(const Image& x, const Image& reference) {
  if (!x.same_shape(reference)) throw std::invalid_argument("psnr: shape mismatch");
  double sq = 0.0;
  long n = 0;
  for (int ch = 0; ch < x.channels(); ++ch) {
    sq += (x.plane(ch) - reference.plane(ch)).squaredNorm();
    n += x.plane(ch).size();
  }
  double mse = sq / double(n);
  if (mse == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(255.0 * 255.0 / mse);
}

static bool has_suffix(const std::string& s, const std::string& suf) {
  return s.size() >= suf.size() &&
         s.compare(s.size() - suf.size(), suf.size(), suf) == 0;
}

Image load_image(const std::string& path) {
  if (has_suffix(path, ".png") || has_suffix(path, ".PNG")) return load_png(path);
  if (has_suffix(path, ".pgm") || has_suffix(path, ".ppm") || has_suffix(path, ".pnm"))
    return load_pnm(path);
  throw std::runtime_error("load_image: unsupported format: " + path);
}

void save_image(const Image& img, const std::string& path) {
  if (has_suffix(path, ".png") || has_suffix(path, ".PNG")) return save_png(img, path);
  if (has_suffix(path, ".pgm") || has_suffix(path, ".ppm") || has_suffix(path, ".pnm"))
    return save_pnm(img, path);
  throw std::runtime_error("save_image: unsupported format: " + path);
}

std::vector<ManifestEntry> load_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open manifest " + path);
  std::string dir;
  if (auto slash = path.find_last_of('/'); slash != std::string::npos)
    dir = path.substr(0, slash + 1);
  std::vector<ManifestEntry> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream row(line);
    ManifestEntry e;
    if (!(row >> e.name >> e.path >> e.height >> e.width >> e.channels))
      throw std::runtime_error("bad manifest line: " + line);
    if (!e.path.empty() && e.path[0] != '/') e.path = dir + e.path;
    out.push_back(std::move(e));
  }
  return out;
}

Image load_manifest_image(const std::vector<ManifestEntry>& manifest,
                          const std::string& name) {
  for (const auto& e : manifest) {
    if (e.name != name) continue;
    Image img = load_image(e.path);
    if (img.height() != e.height || img.width() != e.width || img.channels() != e.channels)
      throw std::runtime_error("manifest shape mismatch for " + name);
    return img;
  }
  throw std::runtime_error("manifest has no entry named " + name);
}

}  // namespace gscir
