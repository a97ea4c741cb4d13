#pragma once

#include <cstdint>
#include <span>
#include <string_view>

#include "vddp/common/bytes.hpp"
#include "vddp/common/hash.hpp"

namespace vddp {

// SHA-256 counter-mode generator. Deterministic when seeded; seeded from
// OS entropy by Rng::from_os().
class Rng {
 public:
  explicit Rng(std::uint64_t seed);
  explicit Rng(std::span<const std::uint8_t> seed);
  static Rng from_os();

  // Independent child stream keyed by a label; the parent is not advanced.
  Rng derive(std::string_view label) const;
  Rng derive(std::string_view label, std::uint64_t index) const;

  void fill(std::span<std::uint8_t> out);
  std::uint64_t next_u64();
  // Uniform in [0, bound).
  std::uint64_t uniform(std::uint64_t bound);
  bool bit() { return next_u64() & 1; }
  // Compatibility with <random> distributions.
  using result_type = std::uint64_t;
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type(0); }
  result_type operator()() { return next_u64(); }

 private:
  void refill();
  Digest key_{};
  std::uint64_t counter_ = 0;
  Digest block_{};
  std::size_t used_ = 32;
};

}  // namespace vddp
