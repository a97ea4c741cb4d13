#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "vddp/algebra/field.hpp"
#include "vddp/common/rng.hpp"

namespace vddp::algebra {

// Prime field with a small compile-time modulus (P < 2^32). Mirrors the
// MontField interface used by the generic algorithms so toy primes can be
// enumerated exhaustively in tests.
template <std::uint64_t Mod>
class SmallField {
  static_assert(Mod > 2 && Mod < (1ULL << 32), "SmallField modulus out of range");

  static constexpr unsigned compute_two_adicity() {
    unsigned s = 0;
    std::uint64_t q = Mod - 1;
    while (!(q & 1)) {
      q >>= 1;
      ++s;
    }
    return s;
  }

 public:
  static constexpr std::uint64_t P = Mod;
  static constexpr unsigned TWO_ADICITY = compute_two_adicity();

  constexpr SmallField() = default;
  static SmallField zero() { return SmallField(); }
  static SmallField one() { return from_u64(1); }
  static SmallField from_u64(std::uint64_t x) {
    SmallField f;
    f.v_ = x % Mod;
    return f;
  }
  static SmallField from_i64(std::int64_t x) {
    std::int64_t m = x % std::int64_t(Mod);
    if (m < 0) m += Mod;
    return from_u64(std::uint64_t(m));
  }
  static SmallField random(Rng& rng) { return from_u64(rng.uniform(Mod)); }
  static SmallField random_nonzero(Rng& rng) { return from_u64(1 + rng.uniform(Mod - 1)); }

  std::uint64_t value() const { return v_; }
  bool is_zero() const { return v_ == 0; }
  bool is_one() const { return v_ == 1; }
  bool operator==(const SmallField& o) const { return v_ == o.v_; }
  bool operator!=(const SmallField& o) const { return v_ != o.v_; }
  SmallField operator+(const SmallField& o) const { return from_u64(v_ + o.v_); }
  SmallField operator-(const SmallField& o) const { return from_u64(v_ + Mod - o.v_); }
  SmallField operator-() const { return from_u64(Mod - v_); }
  SmallField operator*(const SmallField& o) const { return from_u64(v_ * o.v_); }
  SmallField& operator+=(const SmallField& o) { return *this = *this + o; }
  SmallField& operator-=(const SmallField& o) { return *this = *this - o; }
  SmallField& operator*=(const SmallField& o) { return *this = *this * o; }
  SmallField square() const { return *this * *this; }
  SmallField pow(std::uint64_t e) const {
    SmallField r = one(), b = *this;
    while (e) {
      if (e & 1) r *= b;
      b = b.square();
      e >>= 1;
    }
    return r;
  }
  SmallField inv() const {
    if (is_zero()) throw NonInvertible();
    return pow(Mod - 2);
  }
  int legendre() const {
    if (is_zero()) return 0;
    return pow((Mod - 1) / 2).is_one() ? 1 : -1;
  }

  // Smallest primitive root, found by trial over the prime factors of P-1.
  static SmallField generator() {
    std::vector<std::uint64_t> primes;
    std::uint64_t q = Mod - 1;
    for (std::uint64_t f = 2; f * f <= q; ++f) {
      if (q % f == 0) {
        primes.push_back(f);
        while (q % f == 0) q /= f;
      }
    }
    if (q > 1) primes.push_back(q);
    for (std::uint64_t g = 2; g < Mod; ++g) {
      bool ok = true;
      for (auto f : primes) ok = ok && !from_u64(g).pow((Mod - 1) / f).is_one();
      if (ok) return from_u64(g);
    }
    throw std::logic_error("no primitive root");
  }
  static SmallField nonresidue() { return generator(); }
  static bool order_divides(std::uint64_t n) { return n != 0 && (Mod - 1) % n == 0; }
  static SmallField element_of_order(std::uint64_t n) {
    if (!order_divides(n)) throw std::invalid_argument("order does not divide p-1");
    return generator().pow((Mod - 1) / n);
  }
  static SmallField root_of_unity(unsigned log_n) {
    if (log_n > TWO_ADICITY) throw std::invalid_argument("unsupported domain size");
    return generator().pow((Mod - 1) >> log_n);
  }

 private:
  std::uint64_t v_ = 0;
};

}  // namespace vddp::algebra
