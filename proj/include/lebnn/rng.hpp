#pragma once

#include <cstdint>
#include <random>

namespace lebnn {

using Rng = std::mt19937_64;

// Independent streams drawn from one derived generator family.
enum class Stream : std::uint64_t { samples = 0, ties = 1, labels = 2 };

std::uint64_t splitmix64(std::uint64_t& state);

// Generator for (master seed, trial, stream); counter-based, so trial i sees
// the same numbers regardless of which worker runs it.
Rng derive_rng(std::uint64_t seed, std::uint64_t trial, Stream stream);

// Uniform on [0,1) with 53 random bits.
double uniform01(Rng& rng);

// Uniform integer in [0, n), unbiased.
std::uint64_t uniform_index(Rng& rng, std::uint64_t n);

// LEBNN_SEED from the environment, else 42.
std::uint64_t default_seed();

}  // namespace lebnn
