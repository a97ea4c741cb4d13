#include "vddp/common/rng.hpp"

#include <openssl/rand.h>

#include <stdexcept>

namespace vddp {

Rng::Rng(std::uint64_t seed) {
  Hasher h("vddp.rng.seed");
  h.update_u64(seed);
  key_ = h.finish();
}

Rng::Rng(std::span<const std::uint8_t> seed) {
  Hasher h("vddp.rng.bytes");
  h.update(seed);
  key_ = h.finish();
}

Rng Rng::from_os() {
  std::uint8_t buf[32];
  if (RAND_bytes(buf, sizeof buf) != 1) throw std::runtime_error("OS entropy unavailable");
  return Rng(std::span<const std::uint8_t>(buf, sizeof buf));
}

Rng Rng::derive(std::string_view label) const {
  Hasher h("vddp.rng.derive");
  h.update(key_).update_u64(label.size()).update(label);
  Rng child(0);
  child.key_ = h.finish();
  return child;
}

Rng Rng::derive(std::string_view label, std::uint64_t index) const {
  Hasher h("vddp.rng.derive_idx");
  h.update(key_).update_u64(label.size()).update(label).update_u64(index);
  Rng child(0);
  child.key_ = h.finish();
  return child;
}

void Rng::refill() {
  Hasher h;
  h.update(key_).update_u64(counter_++);
  block_ = h.finish();
  used_ = 0;
}

void Rng::fill(std::span<std::uint8_t> out) {
  for (auto& b : out) {
    if (used_ == block_.size()) refill();
    b = block_[used_++];
  }
}

std::uint64_t Rng::next_u64() {
  std::uint8_t b[8];
  fill(b);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= std::uint64_t(b[i]) << (8 * i);
  return v;
}

std::uint64_t Rng::uniform(std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("uniform: empty range");
  // Rejection sampling to avoid modulo bias.
  std::uint64_t limit = ~std::uint64_t(0) - (~std::uint64_t(0) % bound);
  for (;;) {
    auto v = next_u64();
    if (v < limit) return v % bound;
  }
}

}  // namespace vddp
