#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "ltecir/common.hpp"

namespace ltecir {

// splitmix64 finalizer; used to derive independent stream seeds so that
// per-frame / per-tap draws do not depend on generation order.
inline uint64_t mix_seed(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline uint64_t derive_seed(uint64_t base, uint64_t a, uint64_t b = 0, uint64_t c = 0) {
  uint64_t s = mix_seed(base);
  s = mix_seed(s ^ (0xa0761d6478bd642fULL + a));
  s = mix_seed(s ^ (0xe7037ed1a0b428dbULL + b));
  s = mix_seed(s ^ (0x8ebc6af09c88c6e3ULL + c));
  return s;
}

// mt19937_64 engine with hand-rolled distributions. The standard library does
// not specify normal_distribution's algorithm, so Box-Muller is done here to
// keep streams stable across standard libraries.
class Rng {
 public:
  explicit Rng(uint64_t seed) : eng_(seed) {}

  uint64_t next_u64() { return eng_(); }

  // uniform in [0, 1)
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // uniform in [lo, hi]
  int uniform_int(int lo, int hi) {
    const uint64_t span = static_cast<uint64_t>(hi - lo) + 1;
    return lo + static_cast<int>(next_u64() % span);
  }

  // standard normal, Box-Muller
  double gaussian() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    // u1 in (0, 1] so log() is finite
    const double u1 = (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double th = kTwoPi * u2;
    spare_ = r * std::sin(th);
    has_spare_ = true;
    return r * std::cos(th);
  }

  // circularly-symmetric complex normal with E|z|^2 = 1
  cplx cgaussian() {
    const double s = std::sqrt(0.5);
    const double re = gaussian();
    const double im = gaussian();
    return {s * re, s * im};
  }

 private:
  std::mt19937_64 eng_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace ltecir
