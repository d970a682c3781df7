#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace gscir {

// Deterministic RNG with explicitly specified value derivations, so that
// seeded outputs do not depend on standard-library distribution internals.
class Rng {
 public:
  explicit Rng(uint64_t seed) : gen_(seed) {}

  uint64_t next_u64() { return gen_(); }

  // Uniform in [0, 1) with 53-bit resolution.
  double uniform() { return double(gen_() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, bound).
  uint64_t below(uint64_t bound) {
    // Rejection-free multiply-shift map; bias is negligible for bound << 2^64.
    return uint64_t((__uint128_t(gen_()) * bound) >> 64);
  }

  bool coin() { return (gen_() & 1u) != 0; }

  // Standard normal via Box-Muller.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1, u2;
    do {
      u1 = uniform();
    } while (u1 <= 0.0);
    u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 2.0 * M_PI * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  // First k entries of a seeded Fisher-Yates pass over 0..n-1.
  std::vector<int> sample_without_replacement(int n, int k) {
    std::vector<int> idx(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) idx[size_t(i)] = i;
    for (int i = 0; i < k && i < n - 1; ++i) {
      int j = i + int(below(uint64_t(n - i)));
      std::swap(idx[size_t(i)], idx[size_t(j)]);
    }
    idx.resize(size_t(std::min(k, n)));
    return idx;
  }

 private:
  std::mt19937_64 gen_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace gscir
