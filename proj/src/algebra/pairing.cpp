#include "vddp/algebra/pairing.hpp"

#include <stdexcept>
#include <vector>

namespace vddp::algebra {

using detail::Fp12;
using detail::Fp2;
using detail::Jacobian;

namespace {

// |x| for the BLS parameter x = -0xd201000000010000.
constexpr u64 kBlsX = 0xd201000000010000ULL;

struct Line {
  Fp2 a, b, c;  // coefficients of 1, w^2, w^3
};

// Tangent at T evaluated at P, scaled by 2YZ^3 (an Fp2 factor the final
// exponentiation removes).
Line doubling_line(const Jacobian<Fp2>& t, const G1Affine& p) {
  Fp2 xx = t.X.square(), yy = t.Y.square(), zz = t.Z.square();
  Fp2 a = xx * t.X;
  a = a.dbl() + a - yy.dbl();
  Fp2 b = -((xx.dbl() + xx) * zz) * p.x;
  Fp2 c = (t.Y * zz * t.Z).dbl() * p.y;
  return {a, b, c};
}

// Chord through T and Q evaluated at P, scaled by Z(xq Z^2 - X).
Line addition_line(const Jacobian<Fp2>& t, const G2Affine& q, const G1Affine& p) {
  Fp2 zz = t.Z.square();
  Fp2 n = q.y * zz * t.Z - t.Y;
  Fp2 d = t.Z * (q.x * zz - t.X);
  return {n * q.x - d * q.y, -(n * p.x), d * p.y};
}

Fp12 exp_by_x(const Fp12& f) {
  Fp12 r = Fp12::one();
  for (int b = 63; b >= 0; --b) {
    r = r.square();
    if ((kBlsX >> b) & 1) r *= f;
  }
  return r.conj();  // x is negative; conj inverts on the cyclotomic subgroup
}

}  // namespace

namespace detail {

Fp12 miller_loop(std::span<const G1Affine> ps, std::span<const G2Affine> qs) {
  std::vector<G1Affine> P;
  std::vector<G2Affine> Q;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    if (ps[i].infinity || qs[i].infinity) continue;
    P.push_back(ps[i]);
    Q.push_back(qs[i]);
  }
  std::vector<Jacobian<Fp2>> T;
  for (auto& q : Q) T.push_back(Jacobian<Fp2>::from_affine(q));
  Fp12 f = Fp12::one();
  for (int bit = 62; bit >= 0; --bit) {
    f = f.square();
    for (std::size_t j = 0; j < P.size(); ++j) {
      auto l = doubling_line(T[j], P[j]);
      f = f.mul_by_line(l.a, l.b, l.c);
      T[j] = T[j].dbl();
    }
    if ((kBlsX >> bit) & 1) {
      for (std::size_t j = 0; j < P.size(); ++j) {
        auto l = addition_line(T[j], Q[j], P[j]);
        f = f.mul_by_line(l.a, l.b, l.c);
        T[j] = T[j].add_mixed(Q[j]);
      }
    }
  }
  return f.conj();
}

// f^((p^12 - 1)/r · 3): easy part (p^6 - 1)(p^2 + 1), then the hard part via
// 3(p^4 - p^2 + 1)/r = (x-1)^2 (x+p) (x^2+p^2-1) + 3.
Fp12 final_exponentiation(const Fp12& f) {
  Fp12 t = f.conj() * f.inv();
  t = t.frobenius(2) * t;
  Fp12 a = exp_by_x(t) * t.conj();
  Fp12 b = exp_by_x(a) * a.conj();
  Fp12 c = exp_by_x(b) * b.frobenius(1);
  Fp12 d = exp_by_x(exp_by_x(c)) * c.frobenius(2) * c.conj();
  return d * t.square() * t;
}

}  // namespace detail

GT multi_pairing(std::span<const G1> ps, std::span<const G2> qs) {
  if (ps.size() != qs.size()) throw std::invalid_argument("multi_pairing: length mismatch");
  auto pa = G1::batch_to_affine(ps);
  std::vector<G2Affine> qa(qs.size());
  for (std::size_t i = 0; i < qs.size(); ++i) qa[i] = qs[i].to_affine();
  op_counts().miller_loops += ps.size();
  ++op_counts().final_exps;
  return GT(detail::final_exponentiation(detail::miller_loop(pa, qa)));
}

GT pairing(const G1& p, const G2& q) {
  return multi_pairing(std::span<const G1>(&p, 1), std::span<const G2>(&q, 1));
}

bool pairing_product_is_one(std::span<const G1> ps, std::span<const G2> qs) {
  return multi_pairing(ps, qs).is_one();
}

}  // namespace vddp::algebra
