#pragma once

#include <cmath>
#include <cstdint>
#include <limits>

namespace kpp {

// splitmix64 finalizer
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

/// Seed of replica i derived from a base seed; order independent.
constexpr std::uint64_t replica_seed(std::uint64_t base, std::uint64_t i) noexcept {
  return base ^ mix64((i + 1) * kGolden);
}

/// Genealogical id of child `slot` (0 or 1) of `parent`.
constexpr std::uint64_t child_id(std::uint64_t parent, unsigned slot) noexcept {
  return mix64(parent * 0xd6e8feb86659fd93ULL + 2 * kGolden + slot + 1) | 1ULL;
}

/// Stream seed of particle `id` within a replica.
constexpr std::uint64_t stream_seed(std::uint64_t replica, std::uint64_t id) noexcept {
  return mix64(replica ^ mix64(id + kGolden));
}

/// splitmix64 generator, satisfies UniformRandomBitGenerator.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit SplitMix64(std::uint64_t seed = 0) noexcept : state_(seed) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept { return mix64(state_ += kGolden); }

  /// Uniform on the open interval (0,1).
  double uniform() noexcept { return ((*this)() >> 11) * 0x1.0p-53 + 0x1.0p-54; }

 private:
  std::uint64_t state_;
};

}  // namespace kpp
