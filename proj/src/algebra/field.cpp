#include "vddp/algebra/field.hpp"

#include "vddp/algebra/ops.hpp"

namespace vddp::algebra {

namespace detail {

std::string limbs_to_hex(std::span<const u64> limbs) {
  static const char* digits = "0123456789abcdef";
  std::string s;
  for (std::size_t i = limbs.size(); i-- > 0;)
    for (int n = 15; n >= 0; --n) s.push_back(digits[(limbs[i] >> (4 * n)) & 15]);
  auto nz = s.find_first_not_of('0');
  return "0x" + (nz == std::string::npos ? std::string("0") : s.substr(nz));
}

}  // namespace detail

std::int64_t signed_decode(const Fr& x) {
  bool neg = x.is_lexicographically_largest();
  auto l = (neg ? -x : x).to_limbs();
  if (l[1] || l[2] || l[3] || (l[0] >> 63)) throw std::range_error("signed_decode: magnitude exceeds int64");
  auto m = std::int64_t(l[0]);
  return neg ? -m : m;
}

OpCounts& op_counts() {
  thread_local OpCounts counts;
  return counts;
}

}  // namespace vddp::algebra
