#pragma once

#include <array>
#include <span>
#include <string_view>

#include "vddp/common/bytes.hpp"

namespace vddp {

using Digest = std::array<std::uint8_t, 32>;

Digest sha256(std::span<const std::uint8_t> data);

// Incremental SHA-256 with domain-separated framing helpers.
class Hasher {
 public:
  explicit Hasher(std::string_view domain = {});
  ~Hasher();
  Hasher(const Hasher&) = delete;
  Hasher& operator=(const Hasher&) = delete;

  Hasher& update(std::span<const std::uint8_t> data);
  Hasher& update(std::string_view s);
  Hasher& update_u64(std::uint64_t v);
  Digest finish();

 private:
  void* ctx_;
};

}  // namespace vddp
