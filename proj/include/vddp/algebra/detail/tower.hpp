#pragma once

// Extension-field tower for BLS12-381 pairings. Internal: only the curve and
// pairing code use these types.
//   Fp2  = Fp[u]/(u^2 + 1)
//   Fp6  = Fp2[v]/(v^3 - (u + 1))
//   Fp12 = Fp6[w]/(w^2 - v)

#include <optional>

#include "vddp/algebra/field.hpp"

namespace vddp::algebra::detail {

struct Fp2 {
  Fp c0, c1;

  static Fp2 zero() { return {Fp::zero(), Fp::zero()}; }
  static Fp2 one() { return {Fp::one(), Fp::zero()}; }
  bool is_zero() const { return c0.is_zero() && c1.is_zero(); }
  bool operator==(const Fp2& o) const { return c0 == o.c0 && c1 == o.c1; }
  bool operator!=(const Fp2& o) const { return !(*this == o); }
  Fp2 operator+(const Fp2& o) const { return {c0 + o.c0, c1 + o.c1}; }
  Fp2 operator-(const Fp2& o) const { return {c0 - o.c0, c1 - o.c1}; }
  Fp2 operator-() const { return {-c0, -c1}; }
  Fp2 operator*(const Fp2& o) const {
    Fp aa = c0 * o.c0, bb = c1 * o.c1;
    Fp s = (c0 + c1) * (o.c0 + o.c1);
    return {aa - bb, s - aa - bb};
  }
  Fp2& operator+=(const Fp2& o) { return *this = *this + o; }
  Fp2& operator-=(const Fp2& o) { return *this = *this - o; }
  Fp2& operator*=(const Fp2& o) { return *this = *this * o; }
  Fp2 operator*(const Fp& s) const { return {c0 * s, c1 * s}; }
  Fp2 square() const {
    Fp a = c0 + c1, b = c0 - c1, c = c0 * c1;
    return {a * b, c + c};
  }
  Fp2 dbl() const { return {c0.dbl(), c1.dbl()}; }
  Fp2 conj() const { return {c0, -c1}; }
  // Multiply by the sextic non-residue ξ = u + 1.
  Fp2 mul_xi() const { return {c0 - c1, c0 + c1}; }
  Fp2 inv() const {
    Fp n = (c0.square() + c1.square()).inv();
    return {c0 * n, -(c1 * n)};
  }
  template <class E>
  Fp2 pow(const E& e) const {
    Fp2 r = one();
    for (std::size_t i = e.size(); i-- > 0;)
      for (int b = 63; b >= 0; --b) {
        r = r.square();
        if ((e[i] >> b) & 1) r *= *this;
      }
    return r;
  }
  // Lexicographic order used by compressed G2 encodings: compare c1 first.
  bool is_lexicographically_largest() const {
    if (!c1.is_zero()) return c1.is_lexicographically_largest();
    return c0.is_lexicographically_largest();
  }
  std::optional<Fp2> sqrt() const;
};

struct Fp6 {
  Fp2 c0, c1, c2;

  static Fp6 zero() { return {Fp2::zero(), Fp2::zero(), Fp2::zero()}; }
  static Fp6 one() { return {Fp2::one(), Fp2::zero(), Fp2::zero()}; }
  bool is_zero() const { return c0.is_zero() && c1.is_zero() && c2.is_zero(); }
  bool operator==(const Fp6& o) const { return c0 == o.c0 && c1 == o.c1 && c2 == o.c2; }
  Fp6 operator+(const Fp6& o) const { return {c0 + o.c0, c1 + o.c1, c2 + o.c2}; }
  Fp6 operator-(const Fp6& o) const { return {c0 - o.c0, c1 - o.c1, c2 - o.c2}; }
  Fp6 operator-() const { return {-c0, -c1, -c2}; }
  Fp6 operator*(const Fp6& o) const {
    Fp2 t0 = c0 * o.c0, t1 = c1 * o.c1, t2 = c2 * o.c2;
    Fp2 r0 = ((c1 + c2) * (o.c1 + o.c2) - t1 - t2).mul_xi() + t0;
    Fp2 r1 = (c0 + c1) * (o.c0 + o.c1) - t0 - t1 + t2.mul_xi();
    Fp2 r2 = (c0 + c2) * (o.c0 + o.c2) - t0 - t2 + t1;
    return {r0, r1, r2};
  }
  Fp6 operator*(const Fp2& s) const { return {c0 * s, c1 * s, c2 * s}; }
  Fp6 square() const { return *this * *this; }
  // Multiply by v.
  Fp6 mul_v() const { return {c2.mul_xi(), c0, c1}; }
  Fp6 inv() const {
    Fp2 t0 = c0.square() - (c1 * c2).mul_xi();
    Fp2 t1 = c2.square().mul_xi() - c0 * c1;
    Fp2 t2 = c1.square() - c0 * c2;
    Fp2 den = c0 * t0 + (c2 * t1 + c1 * t2).mul_xi();
    Fp2 di = den.inv();
    return {t0 * di, t1 * di, t2 * di};
  }
};

struct Fp12 {
  Fp6 c0, c1;

  static Fp12 one() { return {Fp6::one(), Fp6::zero()}; }
  bool is_one() const { return c0 == Fp6::one() && c1.is_zero(); }
  bool operator==(const Fp12& o) const { return c0 == o.c0 && c1 == o.c1; }
  bool operator!=(const Fp12& o) const { return !(*this == o); }
  Fp12 operator*(const Fp12& o) const {
    Fp6 aa = c0 * o.c0, bb = c1 * o.c1;
    Fp6 s = (c0 + c1) * (o.c0 + o.c1);
    return {aa + bb.mul_v(), s - aa - bb};
  }
  Fp12& operator*=(const Fp12& o) { return *this = *this * o; }
  Fp12 square() const {
    Fp6 ab = c0 * c1;
    Fp6 t = (c0 + c1) * (c0 + c1.mul_v());
    return {t - ab - ab.mul_v(), ab + ab};
  }
  Fp12 conj() const { return {c0, -c1}; }
  Fp12 inv() const {
    Fp6 den = (c0.square() - c1.square().mul_v()).inv();
    return {c0 * den, -(c1 * den)};
  }
  // Sparse product with c0.c0 = a, c0.c1 = b, c1.c1 = c (a Miller-loop line).
  Fp12 mul_by_line(const Fp2& a, const Fp2& b, const Fp2& c) const;
  // x -> x^(p^k) for k in {1, 2, 3}.
  Fp12 frobenius(int k) const;
};

}  // namespace vddp::algebra::detail
