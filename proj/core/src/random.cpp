#include "fraclat/random.hpp"

namespace fraclat {

namespace {

std::uint64_t splitmix(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed * 0x9E3779B97F4A7C15ULL + (stream + 1) * 0xD1B54A32D192ED03ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

PortableRng::PortableRng(std::uint64_t seed, std::uint64_t stream) : gen_(splitmix(seed, stream)) {}

int PortableRng::integer(int lo, int hi) {
  const auto span = static_cast<std::uint64_t>(static_cast<std::int64_t>(hi) - lo + 1);
  return lo + static_cast<int>(gen_() % span);
}

Field random_field(const LatticeGeometry& geom, PortableRng& rng) {
  Field u(geom);
  for (std::size_t i = 0; i < u.size(); ++i) u[i] = rng.uniform(-1.0, 1.0);
  return u;
}

}  // namespace fraclat
