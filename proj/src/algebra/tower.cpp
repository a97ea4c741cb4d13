#include <gmp.h>

#include <array>
#include <vector>

#include "vddp/algebra/detail/tower.hpp"

namespace vddp::algebra::detail {

namespace {

Fp fp_sqrt_candidate(const Fp& a) {
  // p ≡ 3 (mod 4): a^((p+1)/4).
  auto e = Fp::modulus();
  Fp::Limbs one{};
  one[0] = 1;
  add_into(e, one);
  return a.pow(shr(e, 2));
}

std::vector<u64> mpz_limbs(const mpz_t z) {
  std::size_t count = (mpz_sizeinbase(z, 2) + 63) / 64;
  std::vector<u64> out(count ? count : 1, 0);
  mpz_export(out.data(), &count, -1, sizeof(u64), 0, 0, z);
  return out;
}

struct FrobConstants {
  // gamma[k-1][i] = ξ^(i(p^k - 1)/6)
  std::array<std::array<Fp2, 6>, 3> gamma;

  FrobConstants() {
    mpz_t p, pk, e;
    mpz_inits(p, pk, e, nullptr);
    auto P = Fp::modulus();
    mpz_import(p, P.size(), -1, sizeof(u64), 0, 0, P.data());
    mpz_set(pk, p);
    Fp2 xi{Fp::one(), Fp::one()};
    for (int k = 0; k < 3; ++k) {
      mpz_sub_ui(e, pk, 1);
      mpz_divexact_ui(e, e, 6);
      auto limbs = mpz_limbs(e);
      Fp2 g1 = xi.pow(limbs);
      gamma[k][0] = Fp2::one();
      for (int i = 1; i < 6; ++i) gamma[k][i] = gamma[k][i - 1] * g1;
      mpz_mul(pk, pk, p);
    }
    mpz_clears(p, pk, e, nullptr);
  }
};

const FrobConstants& frob() {
  static const FrobConstants c;
  return c;
}

Fp6 mul_by_01(const Fp6& a, const Fp2& x, const Fp2& y) {
  Fp2 t0 = a.c0 * x, t1 = a.c1 * y;
  return {(a.c2 * y).mul_xi() + t0, (a.c0 + a.c1) * (x + y) - t0 - t1, a.c2 * x + t1};
}

}  // namespace

std::optional<Fp2> Fp2::sqrt() const {
  auto fp_sqrt = [](const Fp& a) -> std::optional<Fp> {
    Fp s = fp_sqrt_candidate(a);
    if (s.square() == a) return s;
    return std::nullopt;
  };
  if (c1.is_zero()) {
    if (auto s = fp_sqrt(c0)) return Fp2{*s, Fp::zero()};
    if (auto s = fp_sqrt(-c0)) return Fp2{Fp::zero(), *s};
    return std::nullopt;
  }
  auto alpha = fp_sqrt(c0.square() + c1.square());
  if (!alpha) return std::nullopt;
  Fp half = Fp::from_u64(2).inv();
  Fp delta = (c0 + *alpha) * half;
  auto x0 = fp_sqrt(delta);
  if (!x0) {
    delta = (c0 - *alpha) * half;
    x0 = fp_sqrt(delta);
    if (!x0) return std::nullopt;
  }
  Fp x1 = c1 * (x0->dbl()).inv();
  Fp2 r{*x0, x1};
  if (r.square() != *this) return std::nullopt;
  return r;
}

Fp12 Fp12::mul_by_line(const Fp2& a, const Fp2& b, const Fp2& c) const {
  Fp6 aa = mul_by_01(c0, a, b);
  Fp6 bb = Fp6{c1.c0 * c, c1.c1 * c, c1.c2 * c}.mul_v();
  Fp6 s = mul_by_01(c0 + c1, a, b + c);
  return {aa + bb.mul_v(), s - aa - bb};
}

Fp12 Fp12::frobenius(int k) const {
  const auto& g = frob().gamma[k - 1];
  auto f = [k](const Fp2& x) { return (k & 1) ? x.conj() : x; };
  Fp12 r;
  r.c0.c0 = f(c0.c0);
  r.c1.c0 = f(c1.c0) * g[1];
  r.c0.c1 = f(c0.c1) * g[2];
  r.c1.c1 = f(c1.c1) * g[3];
  r.c0.c2 = f(c0.c2) * g[4];
  r.c1.c2 = f(c1.c2) * g[5];
  return r;
}

}  // namespace vddp::algebra::detail
