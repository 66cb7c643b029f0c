#pragma once

#include <cmath>
#include <cstdint>

namespace bltk {

// Counter-based splittable generator: a (seed, stream) pair names an
// independent deterministic stream, so parallel tasks can draw without
// shared state and results do not depend on scheduling.
class SplitRng {
 public:
  SplitRng(uint64_t seed, uint64_t stream = 0)
      : key_(mix(mix(seed + 0x9e3779b97f4a7c15ull) ^ mix(stream + 0xbf58476d1ce4e5b9ull))) {}

  uint64_t next_u64() { return mix(key_ + (++counter_) * 0x9e3779b97f4a7c15ull); }

  // Uniform in [0, 1).
  double next_double() { return (next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = std::max(next_double(), 0x1.0p-60), u2 = next_double();
    double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(6.283185307179586477 * u2);
    have_spare_ = true;
    return r * std::cos(6.283185307179586477 * u2);
  }

 private:
  static uint64_t mix(uint64_t z) {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ull;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebull;
    z ^= z >> 31;
    return z;
  }
  uint64_t key_;
  uint64_t counter_ = 0;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace bltk
