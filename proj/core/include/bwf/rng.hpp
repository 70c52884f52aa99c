#pragma once

#include <cstdint>

namespace bwf {

// SplitMix64: tiny, splittable, platform-independent stream. We avoid the
// standard distributions on purpose — their output is implementation-defined,
// and reports must be byte-identical everywhere.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // uniform in [0, 1)
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // uniform in [lo, hi)
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // independent child stream; deterministic function of (seed, index)
  Rng split(std::uint64_t index) const {
    Rng probe(state_ ^ (0x6a09e667f3bcc909ULL + index * 0x3c6ef372fe94f82bULL));
    return Rng(probe.next_u64());
  }

 private:
  std::uint64_t state_;
};

}  // namespace bwf
