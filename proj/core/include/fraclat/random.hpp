#pragma once

#include <cstdint>
#include <random>

#include "fraclat/lattice.hpp"

namespace fraclat {

/// Draws built from raw mt19937_64 words, so sequences are identical across standard libraries.
class PortableRng {
 public:
  explicit PortableRng(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t next() { return gen_(); }
  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Uniform integer in [lo, hi].
  int integer(int lo, int hi);

 private:
  std::mt19937_64 gen_;
};

/// Independent uniform(-1, 1) values on every site.
Field random_field(const LatticeGeometry& geom, PortableRng& rng);

}  // namespace fraclat
