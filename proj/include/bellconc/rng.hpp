#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <string_view>

namespace bellconc {

/// xoshiro256** engine. Satisfies UniformRandomBitGenerator so it plugs into
/// the <random> distributions.
class Rng {
public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed = 0x9e3779b97f4a7c15ULL);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept;

private:
  std::array<std::uint64_t, 4> s_;
};

std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Seed of the substream identified by (master seed, purpose tag, index).
/// Independent of how indices are partitioned across workers.
std::uint64_t substream_seed(std::uint64_t seed, std::string_view tag, std::uint64_t index) noexcept;

inline Rng substream(std::uint64_t seed, std::string_view tag, std::uint64_t index) {
  return Rng(substream_seed(seed, tag, index));
}

/// FNV-1a over raw bytes.
std::uint64_t fnv1a64(std::string_view bytes) noexcept;

}  // namespace bellconc
