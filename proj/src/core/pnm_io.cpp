#include <cstdint>
#include <fstream>
#include <stdexcept>

#include "core/image.hpp"

namespace gscir {

namespace {

// Reads the next whitespace/comment-delimited token of a PNM header.
std::string next_token(std::istream& in) {
  std::string tok;
  int c;
  while ((c = in.get()) != EOF) {
    if (c == '#') {
      while ((c = in.get()) != EOF && c != '\n') {
      }
      continue;
    }
    if (std::isspace(c)) {
      if (!tok.empty()) break;
      continue;
    }
    tok.push_back(char(c));
  }
  if (tok.empty()) throw std::runtime_error("pnm: truncated header");
  return tok;
}

}  // namespace

Image load_pnm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("pnm: cannot open " + path);
  std::string magic = next_token(in);
  int channels;
  if (magic == "P5")
    channels = 1;
  else if (magic == "P6")
    channels = 3;
  else
    throw std::runtime_error("pnm: unsupported magic '" + magic + "' in " + path);
  int w = std::stoi(next_token(in));
  int h = std::stoi(next_token(in));
  int maxval = std::stoi(next_token(in));
  if (w < 1 || h < 1) throw std::runtime_error("pnm: bad dimensions in " + path);
  if (maxval != 255) throw std::runtime_error("pnm: only maxval 255 supported");

  std::vector<uint8_t> buf(size_t(w) * size_t(h) * size_t(channels));
  in.read(reinterpret_cast<char*>(buf.data()), std::streamsize(buf.size()));
  if (size_t(in.gcount()) != buf.size()) throw std::runtime_error("pnm: truncated pixel data");

  Image img(h, w, channels);
  size_t i = 0;
  for (int r = 0; r < h; ++r)
    for (int c = 0; c < w; ++c)
      for (int ch = 0; ch < channels; ++ch) img.at(r, c, ch) = double(buf[i++]);
  return img;
}

void save_pnm(const Image& img, const std::string& path) {
  if (img.channels() != 1 && img.channels() != 3)
    throw std::runtime_error("pnm: only 1- or 3-channel images");
  Image q = quantize_u8(img);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("pnm: cannot write " + path);
  out << (img.channels() == 1 ? "P5" : "P6") << "\n"
      << img.width() << " " << img.height() << "\n255\n";
  std::vector<uint8_t> buf;
  buf.reserve(size_t(img.width()) * size_t(img.height()) * size_t(img.channels()));
  for (int r = 0; r < img.height(); ++r)
    for (int c = 0; c < img.width(); ++c)
      for (int ch = 0; ch < img.channels(); ++ch) buf.push_back(uint8_t(q.at(r, c, ch)));
  out.write(reinterpret_cast<const char*>(buf.data()), std::streamsize(buf.size()));
  if (!out) throw std::runtime_error("pnm: write failed for " + path);
}

}  // namespace gscir
