#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <limits>

#include "core/image.hpp"
#include "core/degradation.hpp"
#include "core/rng.hpp"

using namespace gscir;

namespace {

std::string tmp_path(const std::string& name) {
  return std::string("/tmp/gscir_test_") + name;
}

Image random_u8_image(int h, int w, int channels, uint64_t seed) {
  Rng rng(seed);
  Image img(h, w, channels);
  for (int ch = 0; ch < channels; ++ch)
    for (int r = 0; r < h; ++r)
      for (int c = 0; c < w; ++c) img.at(r, c, ch) = double(rng.below(256));
  return img;
}

}  // namespace

TEST_CASE("pgm save/load round trip is lossless on integer images") {
  Image img = random_u8_image(13, 9, 1, 1);
  auto path = tmp_path("roundtrip.pgm");
  save_image(img, path);
  Image back = load_image(path);
  REQUIRE(back.same_shape(img));
  CHECK((back.plane(0) - img.plane(0)).cwiseAbs().maxCoeff() == 0.0);
  std::remove(path.c_str());
}

TEST_CASE("ppm and png round trips are lossless on integer images") {
  Image img = random_u8_image(7, 11, 3, 2);
  for (const char* ext : {"rt.ppm", "rt.png"}) {
    auto path = tmp_path(ext);
    save_image(img, path);
    Image back = load_image(path);
    REQUIRE(back.same_shape(img));
    for (int ch = 0; ch < 3; ++ch)
      CHECK((back.plane(ch) - img.plane(ch)).cwiseAbs().maxCoeff() == 0.0);
    std::remove(path.c_str());
  }
}

TEST_CASE("loading a pgm of known bytes yields exact values") {
  auto path = tmp_path("known.pgm");
  {
    std::ofstream out(path, std::ios::binary);
    out << "P5\n# comment line\n3 2\n255\n";
    const unsigned char bytes[6] = {0, 17, 255, 42, 128, 7};
    out.write(reinterpret_cast<const char*>(bytes), 6);
  }
  Image img = load_image(path);
  REQUIRE(img.height() == 2);
  REQUIRE(img.width() == 3);
  CHECK(img.at(0, 0) == 0.0);
  CHECK(img.at(0, 1) == 17.0);
  CHECK(img.at(0, 2) == 255.0);
  CHECK(img.at(1, 0) == 42.0);
  CHECK(img.at(1, 1) == 128.0);
  CHECK(img.at(1, 2) == 7.0);
  std::remove(path.c_str());
}

TEST_CASE("saving clamps out-of-range values") {
  Image img(2, 2, 1, 100.0);
  img.at(0, 0) = 300.0;
  img.at(1, 1) = -12.0;
  auto path = tmp_path("clamp.pgm");
  save_image(img, path);
  Image back = load_image(path);
  CHECK(back.at(0, 0) == 255.0);
  CHECK(back.at(1, 1) == 0.0);
  CHECK(back.at(0, 1) == 100.0);
  std::remove(path.c_str());
}

TEST_CASE("quantize rounds half to even") {
  Image img(1, 4, 1);
  img.at(0, 0) = 0.5;
  img.at(0, 1) = 1.5;
  img.at(0, 2) = 2.5;
  img.at(0, 3) = 3.5;
  Image q = quantize_u8(img);
  CHECK(q.at(0, 0) == 0.0);
  CHECK(q.at(0, 1) == 2.0);
  CHECK(q.at(0, 2) == 2.0);
  CHECK(q.at(0, 3) == 4.0);
}

TEST_CASE("psnr basics") {
  Image a(4, 4, 1, 0.0);
  Image b(4, 4, 1, 255.0);
  CHECK(psnr(a, a) == std::numeric_limits<double>::infinity());
  CHECK(psnr(a, b) == doctest::Approx(0.0).epsilon(1e-12));

  // MSE exactly 1
  Image c = a;
  for (int r = 0; r < 4; ++r)
    for (int col = 0; col < 4; ++col) c.at(r, col) = 1.0;
  CHECK(psnr(a, c) == doctest::Approx(48.1308036086791).epsilon(1e-12));

  Image wrong(3, 4, 1, 0.0);
  CHECK_THROWS_AS(psnr(a, wrong), std::invalid_argument);
}

TEST_CASE("psnr is symmetric") {
  Image a = random_u8_image(16, 16, 1, 3);
  Image b = random_u8_image(16, 16, 1, 4);
  CHECK(psnr(a, b) == doctest::Approx(psnr(b, a)).epsilon(1e-14));
}

TEST_CASE("psnr decreases as gaussian noise grows") {
  Image base(32, 32, 1, 128.0);
  double prev = std::numeric_limits<double>::infinity();
  for (double sigma : {2.0, 8.0, 32.0}) {
    double acc = 0.0;
    for (uint64_t seed = 0; seed < 5; ++seed)
      acc += psnr(add_gaussian_noise(base, sigma, seed), base);
    acc /= 5.0;
    CHECK(acc < prev);
    prev = acc;
  }
}

TEST_CASE("grayscale conversion uses rec601 weights") {
  Image img(1, 1, 3);
  img.at(0, 0, 0) = 100.0;
  img.at(0, 0, 1) = 200.0;
  img.at(0, 0, 2) = 50.0;
  Image g = to_grayscale(img);
  CHECK(g.channels() == 1);
  CHECK(g.at(0, 0) == doctest::Approx(0.299 * 100 + 0.587 * 200 + 0.114 * 50));
}

TEST_CASE("unsupported format errors") {
  CHECK_THROWS(load_image("/tmp/definitely_missing_gscir.pgm"));
  CHECK_THROWS(load_image("image.bmp"));
}

TEST_CASE("manifest lookup validates shapes") {
  Image img = random_u8_image(6, 9, 1, 8);
  save_image(img, tmp_path("mani.pgm"));
  {
    std::ofstream out(tmp_path("manifest.txt"));
    out << "# comment\n";
    out << "small\tgscir_test_mani.pgm\t6\t9\t1\n";
    out << "wrong\tgscir_test_mani.pgm\t7\t9\t1\n";
  }
  auto manifest = load_manifest(tmp_path("manifest.txt"));
  REQUIRE(manifest.size() == 2);
  Image back = load_manifest_image(manifest, "small");
  CHECK(back.same_shape(img));
  CHECK_THROWS(load_manifest_image(manifest, "wrong"));
  CHECK_THROWS(load_manifest_image(manifest, "absent"));
  std::remove(tmp_path("mani.pgm").c_str());
  std::remove(tmp_path("manifest.txt").c_str());
}
