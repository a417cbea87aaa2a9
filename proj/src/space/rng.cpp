#include "lebnn/rng.hpp"

#include <cstdlib>
#include <limits>
#include <string>

namespace lebnn {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

Rng derive_rng(std::uint64_t seed, std::uint64_t trial, Stream stream) {
  std::uint64_t state = seed;
  std::uint64_t key = splitmix64(state);
  state = key ^ (trial * 0xD1B54A32D192ED03ULL);
  key = splitmix64(state);
  state = key ^ (static_cast<std::uint64_t>(stream) * 0x8CB92BA72F3D8DD7ULL);
  return Rng(splitmix64(state));
}

double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::uint64_t uniform_index(Rng& rng, std::uint64_t n) {
  if (n <= 1) return 0;
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t v = rng();
  while (v >= limit) v = rng();
  return v % n;
}

std::uint64_t default_seed() {
  if (const char* env = std::getenv("LEBNN_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      return 42;
    }
  }
  return 42;
}

}  // namespace lebnn
