#pragma once

#include <cstdint>
#include <initializer_list>

namespace progset {

// Counter-based generator: every draw is a pure function of (seed, counter),
// so sets and samples do not depend on iteration order or thread count.
// Reference vectors live in tests/generators_test.cpp.

constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t keyed_u64(std::uint64_t seed, std::uint64_t counter) noexcept {
  return mix64(seed ^ mix64(counter));
}

/// Uniform double in [0, 1) with 53 random bits.
constexpr double keyed_unit(std::uint64_t seed, std::uint64_t counter) noexcept {
  return static_cast<double>(keyed_u64(seed, counter) >> 11) * 0x1.0p-53;
}

/// Folds a list of integers into a child seed, e.g. (base, q, grid index, trial).
constexpr std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> parts) noexcept {
  std::uint64_t h = mix64(base);
  for (std::uint64_t v : parts) h = mix64(h ^ mix64(v));
  return h;
}

}  // namespace progset
