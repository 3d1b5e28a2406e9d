#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace lorasim {

// Every stochastic component owns one of these. No shared or global streams.
using Rng = std::mt19937_64;

// splitmix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

// Child seed for stream `index` under `parent`. Children of different indices
// are independent of how many siblings exist, so adding trials or devices never
// perturbs existing streams.
std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t index);

// Uniform in [0, 1).
double uniform01(Rng& rng);

// Uniform in [0, n). n must be > 0.
std::size_t uniform_index(Rng& rng, std::size_t n);

// Uniform in [lo, hi], inclusive.
std::int64_t uniform_int(Rng& rng, std::int64_t lo, std::int64_t hi);

}  // namespace lorasim
