#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "vddp/common/bytes.hpp"
#include "vddp/common/rng.hpp"

namespace vddp::algebra {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

struct NonInvertible : std::domain_error {
  NonInvertible() : std::domain_error("non-invertible") {}
};

namespace detail {

template <std::size_t N>
using Limbs = std::array<u64, N>;

template <std::size_t N>
constexpr bool geq(const Limbs<N>& a, const Limbs<N>& b) {
  for (std::size_t i = N; i-- > 0;) {
    if (a[i] != b[i]) return a[i] > b[i];
  }
  return true;
}

template <std::size_t N>
constexpr u64 add_into(Limbs<N>& a, const Limbs<N>& b) {
  u64 carry = 0;
  for (std::size_t i = 0; i < N; ++i) {
    u128 s = u128(a[i]) + b[i] + carry;
    a[i] = u64(s);
    carry = u64(s >> 64);
  }
  return carry;
}

template <std::size_t N>
constexpr u64 sub_into(Limbs<N>& a, const Limbs<N>& b) {
  u64 borrow = 0;
  for (std::size_t i = 0; i < N; ++i) {
    u128 d = u128(a[i]) - b[i] - borrow;
    a[i] = u64(d);
    borrow = u64(d >> 64) & 1;
  }
  return borrow;
}

constexpr u64 neg_inv64(u64 p0) {
  u64 inv = 1;
  for (int i = 0; i < 6; ++i) inv *= 2 - p0 * inv;
  return ~inv + 1;
}

// 2^k mod p by repeated doubling.
template <std::size_t N>
constexpr Limbs<N> pow2_mod(const Limbs<N>& p, unsigned k) {
  Limbs<N> x{};
  x[0] = 1;
  for (unsigned i = 0; i < k; ++i) {
    u64 top = add_into(x, x);
    if (top || geq(x, p)) sub_into(x, p);
  }
  return x;
}

template <std::size_t N>
constexpr Limbs<N> minus_one(Limbs<N> p) {
  Limbs<N> one{};
  one[0] = 1;
  sub_into(p, one);
  return p;
}

template <std::size_t N>
constexpr unsigned two_adicity(const Limbs<N>& p) {
  auto q = minus_one(p);
  unsigned s = 0;
  for (std::size_t i = 0; i < N; ++i) {
    if (q[i] == 0) {
      s += 64;
      continue;
    }
    u64 w = q[i];
    while (!(w & 1)) {
      w >>= 1;
      ++s;
    }
    break;
  }
  return s;
}

// Long division of a multi-limb value by a 64-bit divisor.
template <std::size_t N>
constexpr Limbs<N> div_small(const Limbs<N>& a, u64 d, u64& rem) {
  Limbs<N> q{};
  u128 r = 0;
  for (std::size_t i = N; i-- > 0;) {
    r = (r << 64) | a[i];
    q[i] = u64(r / d);
    r = r % d;
  }
  rem = u64(r);
  return q;
}

template <std::size_t N>
constexpr Limbs<N> shr(const Limbs<N>& a, unsigned k) {
  Limbs<N> out{};
  unsigned ws = k / 64, bs = k % 64;
  for (std::size_t i = 0; i + ws < N; ++i) {
    u64 lo = a[i + ws] >> bs;
    u64 hi = (bs && i + ws + 1 < N) ? (a[i + ws + 1] << (64 - bs)) : 0;
    out[i] = lo | hi;
  }
  return out;
}

std::string limbs_to_hex(std::span<const u64> limbs);

}  // namespace detail

// Prime field in Montgomery representation. Cfg supplies N and the modulus
// P (little-endian limbs) and, optionally, a multiplicative GENERATOR.
template <class Cfg>
class MontField {
 public:
  static constexpr std::size_t N = Cfg::N;
  using Limbs = detail::Limbs<N>;
  static constexpr Limbs P = Cfg::P;
  static constexpr u64 INV = detail::neg_inv64(P[0]);
  static constexpr Limbs R1 = detail::pow2_mod(P, 64 * N);
  static constexpr Limbs R2 = detail::pow2_mod(P, 128 * N);
  static constexpr unsigned TWO_ADICITY = detail::two_adicity(P);
  static constexpr std::size_t kBytes = 8 * N;

  constexpr MontField() : v_{} {}

  static MontField zero() { return MontField(); }
  static MontField one() { return raw(R1); }
  static MontField from_u64(u64 x) {
    Limbs l{};
    l[0] = x;
    return raw(mul_limbs(l, R2));
  }
  // Signed embedding: negative values map to p - |x|.
  static MontField from_i64(std::int64_t x) {
    return x >= 0 ? from_u64(u64(x)) : -from_u64(u64(-(x + 1)) + 1);
  }
  // Canonical integer input; values >= p are reduced.
  static MontField from_limbs(Limbs l) {
    while (detail::geq(l, P)) detail::sub_into(l, P);
    return raw(mul_limbs(l, R2));
  }
  // Little-endian bytes of any length up to 2*kBytes, reduced mod p.
  static MontField from_bytes_wide(std::span<const std::uint8_t> b) {
    if (b.size() > 2 * kBytes) throw std::invalid_argument("from_bytes_wide: input too long");
    Limbs lo{}, hi{};
    for (std::size_t i = 0; i < b.size(); ++i) {
      auto& dst = i < kBytes ? lo : hi;
      std::size_t j = i % kBytes;
      dst[j / 8] |= u64(b[i]) << (8 * (j % 8));
    }
    MontField a = from_limbs(lo);
    MontField h = from_limbs(hi);
    h = raw(mul_limbs(h.v_, R2));
    return a + h;
  }
  // Strict canonical decoding (rejects values >= p).
  static MontField from_bytes(std::span<const std::uint8_t> b) {
    if (b.size() != kBytes) throw DecodeError("field element: wrong length");
    Limbs l{};
    for (std::size_t i = 0; i < kBytes; ++i) l[i / 8] |= u64(b[i]) << (8 * (i % 8));
    if (detail::geq(l, P)) throw DecodeError("field element: non-canonical");
    return from_limbs(l);
  }
  static MontField random(Rng& rng) {
    std::uint8_t buf[2 * kBytes];
    rng.fill(buf);
    return from_bytes_wide(buf);
  }
  static MontField random_nonzero(Rng& rng) {
    for (;;) {
      auto x = random(rng);
      if (!x.is_zero()) return x;
    }
  }

  Limbs to_limbs() const {
    Limbs one{};
    one[0] = 1;
    return mul_limbs(v_, one);
  }
  std::array<std::uint8_t, kBytes> to_bytes() const {
    auto l = to_limbs();
    std::array<std::uint8_t, kBytes> out{};
    for (std::size_t i = 0; i < kBytes; ++i) out[i] = std::uint8_t(l[i / 8] >> (8 * (i % 8)));
    return out;
  }
  std::string to_hex() const { return detail::limbs_to_hex(to_limbs()); }
  // Low 64 bits of the canonical value.
  u64 low_u64() const { return to_limbs()[0]; }

  bool is_zero() const {
    for (auto w : v_)
      if (w) return false;
    return true;
  }
  bool is_one() const { return v_ == R1; }
  bool operator==(const MontField& o) const { return v_ == o.v_; }
  bool operator!=(const MontField& o) const { return v_ != o.v_; }

  MontField operator+(const MontField& o) const {
    Limbs r = v_;
    u64 c = detail::add_into(r, o.v_);
    if (c || detail::geq(r, P)) detail::sub_into(r, P);
    return raw(r);
  }
  MontField operator-(const MontField& o) const {
    Limbs r = v_;
    if (detail::sub_into(r, o.v_)) detail::add_into(r, P);
    return raw(r);
  }
  MontField operator-() const {
    if (is_zero()) return *this;
    Limbs r = P;
    detail::sub_into(r, v_);
    return raw(r);
  }
  MontField operator*(const MontField& o) const { return raw(mul_limbs(v_, o.v_)); }
  MontField& operator+=(const MontField& o) { return *this = *this + o; }
  MontField& operator-=(const MontField& o) { return *this = *this - o; }
  MontField& operator*=(const MontField& o) { return *this = *this * o; }
  MontField square() const { return *this * *this; }
  MontField dbl() const { return *this + *this; }

  template <std::size_t M>
  MontField pow(const std::array<u64, M>& e) const {
    return pow(std::span<const u64>(e.data(), M));
  }
  MontField pow(std::span<const u64> e) const {
    MontField r = one();
    for (std::size_t i = e.size(); i-- > 0;) {
      for (int b = 63; b >= 0; --b) {
        r = r.square();
        if ((e[i] >> b) & 1) r *= *this;
      }
    }
    return r;
  }
  MontField pow(u64 e) const {
    std::array<u64, 1> a{e};
    return pow(a);
  }
  MontField inv() const {
    if (is_zero()) throw NonInvertible();
    Limbs e = P;
    Limbs two{};
    two[0] = 2;
    detail::sub_into(e, two);
    return pow(e);
  }
  // Euler criterion: +1 square, -1 non-square, 0 for zero.
  int legendre() const {
    if (is_zero()) return 0;
    auto e = detail::shr(detail::minus_one(P), 1);
    return pow(e).is_one() ? 1 : -1;
  }
  // Canonical value > (p-1)/2, used for signed decoding and point compression.
  bool is_lexicographically_largest() const {
    auto half = detail::shr(detail::minus_one(P), 1);
    auto l = to_limbs();
    return !detail::geq(half, l);
  }

  static constexpr Limbs modulus() { return P; }
  static constexpr Limbs modulus_minus_one() { return detail::minus_one(P); }
  static MontField generator() { return from_u64(Cfg::GENERATOR); }
  static MontField nonresidue() { return generator(); }
  // Element of exact multiplicative order n; requires n | p-1.
  static MontField element_of_order(u64 n) {
    u64 rem = 0;
    auto q = detail::div_small(modulus_minus_one(), n, rem);
    if (n == 0 || rem != 0) throw std::invalid_argument("order does not divide p-1");
    return generator().pow(q);
  }
  static bool order_divides(u64 n) {
    u64 rem = 0;
    if (n == 0) return false;
    detail::div_small(modulus_minus_one(), n, rem);
    return rem == 0;
  }
  static MontField root_of_unity(unsigned log_n) {
    if (log_n > TWO_ADICITY) throw std::invalid_argument("unsupported domain size");
    return generator().pow(detail::shr(modulus_minus_one(), log_n));
  }

  const Limbs& mont_repr() const { return v_; }

 private:
  static MontField raw(const Limbs& l) {
    MontField f;
    f.v_ = l;
    return f;
  }

  // CIOS Montgomery multiplication a*b*2^(-64N) mod P, in the no-carry
  // form valid because the top limb of P leaves a spare bit.
  static_assert(P[N - 1] < (~u64(0) >> 1) - 1, "modulus needs a spare top bit");
  static Limbs mul_limbs(const Limbs& a, const Limbs& b) {
    Limbs t{};
    for (std::size_t i = 0; i < N; ++i) {
      u128 s = u128(a[0]) * b[i] + t[0];
      u64 c = u64(s >> 64);
      u64 t0 = u64(s);
      u64 m = t0 * INV;
      u128 s2 = u128(m) * P[0] + t0;
      u64 c2 = u64(s2 >> 64);
      for (std::size_t j = 1; j < N; ++j) {
        s = u128(a[j]) * b[i] + t[j] + c;
        c = u64(s >> 64);
        s2 = u128(m) * P[j] + u64(s) + c2;
        c2 = u64(s2 >> 64);
        t[j - 1] = u64(s2);
      }
      t[N - 1] = c + c2;
    }
    if (detail::geq(t, P)) detail::sub_into(t, P);
    return t;
  }

  Limbs v_;
};

struct FrCfg {
  static constexpr std::size_t N = 4;
  static constexpr detail::Limbs<4> P = {0xffffffff00000001ULL, 0x53bda402fffe5bfeULL,
                                         0x3339d80809a1d805ULL, 0x73eda753299d7d48ULL};
  static constexpr u64 GENERATOR = 7;
};

struct FpCfg {
  static constexpr std::size_t N = 6;
  static constexpr detail::Limbs<6> P = {0xb9feffffffffaaabULL, 0x1eabfffeb153ffffULL,
                                         0x6730d2a0f6b0f624ULL, 0x64774b84f38512bfULL,
                                         0x4b1ba7b6434bacd7ULL, 0x1a0111ea397fe69aULL};
  static constexpr u64 GENERATOR = 2;
};

// BLS12-381 scalar field (the protocol's 𝔽).
using Fr = MontField<FrCfg>;
// BLS12-381 base field.
using Fp = MontField<FpCfg>;
using Scalar = Fr;

// Signed decode: residues above (p-1)/2 are negative. Throws if |value| does
// not fit in int64.
std::int64_t signed_decode(const Fr& x);

}  // namespace vddp::algebra
