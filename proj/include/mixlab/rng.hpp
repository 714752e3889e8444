#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace mixlab {

// SplitMix64. Counter-based, so (master seed, stream id) derives independent
// reproducible streams no matter how draws are distributed over workers.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(mix(seed + kGamma)) {}
  Rng(std::uint64_t master, std::uint64_t stream)
      : state_(mix((master + kGamma) ^ mix(stream + 0x6a09e667f3bcc909ULL))) {}

  std::uint64_t next() {
    state_ += kGamma;
    return mix(state_);
  }

  // uniform on [0,1) with 53-bit resolution
  double u01() { return double(next() >> 11) * 0x1.0p-53; }

  // uniform on (0,1), safe as log() argument
  double u01_open() {
    double u;
    do { u = u01(); } while (u == 0.0);
    return u;
  }

  // uniform integer in [0, n), n >= 1
  std::uint64_t below(std::uint64_t n) {
    // rejection to remove modulo bias
    std::uint64_t threshold = (~n + 1) % n;  // (2^64 - n) mod n
    for (;;) {
      std::uint64_t r = next();
      if (r >= threshold) return r % n;
    }
  }

  // uniform on [a, b]
  double uniform(double a, double b) { return a + (b - a) * u01(); }

  // geometric gap for skip sampling: number of failures before next success
  // with success probability p
  std::uint64_t geometric_skip(double p) {
    if (p >= 1.0) return 0;
    double u = u01_open();
    double g = std::floor(std::log(u) / std::log1p(-p));
    if (g < 0) g = 0;
    return static_cast<std::uint64_t>(g);
  }

  // k distinct values from [0, n), ascending (selection sampling)
  std::vector<std::uint64_t> sample_ascending(std::uint64_t k, std::uint64_t n) {
    std::vector<std::uint64_t> out;
    out.reserve(k);
    std::uint64_t remaining = k;
    for (std::uint64_t i = 0; i < n && remaining > 0; ++i) {
      if (below(n - i) < remaining) {
        out.push_back(i);
        --remaining;
      }
    }
    return out;
  }

 private:
  static constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;

  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t state_;
};

}  // namespace mixlab
