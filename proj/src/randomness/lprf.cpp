#include "vddp/randomness/lprf.hpp"

#include <gmp.h>

#include "vddp/algebra/poly.hpp"

namespace vddp::randomness {

const Fr& lprf_qnr() {
  static const Fr q = Fr::nonresidue();
  return q;
}

LprfOutput lprf_eval(const Fr& s, std::size_t d) {
  LprfOutput out;
  out.qnr = lprf_qnr();
  out.bits.resize(d);
  out.witnesses.resize(d);
  for (std::size_t k = 0; k < d; ++k) {
    Fr v = s + Fr::from_u64(k);
    auto sq = algebra::sqrt_witness(v);
    if (sq.is_square) {
      out.bits[k] = 1;
      out.witnesses[k] = {sq.root, 1};
    } else {
      auto alt = algebra::sqrt_witness(out.qnr * v);
      out.bits[k] = 0;
      out.witnesses[k] = {alt.root, 0};
    }
  }
  return out;
}

std::vector<std::uint8_t> lprf_bits(const Fr& s, std::size_t d) {
  mpz_t p, v;
  mpz_init(p);
  mpz_init(v);
  auto pl = Fr::modulus();
  mpz_import(p, pl.size(), -1, 8, 0, 0, pl.data());
  auto sl = s.to_limbs();
  mpz_import(v, sl.size(), -1, 8, 0, 0, sl.data());
  std::vector<std::uint8_t> bits(d);
  for (std::size_t k = 0; k < d; ++k) {
    bits[k] = mpz_legendre(v, p) >= 0;
    mpz_add_ui(v, v, 1);
    if (mpz_cmp(v, p) >= 0) mpz_sub(v, v, p);
  }
  mpz_clear(p);
  mpz_clear(v);
  return bits;
}

bool lprf_check(const Fr& s, const LprfOutput& out) {
  if (out.witnesses.size() != out.bits.size()) return false;
  for (std::size_t k = 0; k < out.bits.size(); ++k) {
    auto& w = out.witnesses[k];
    if (w.b > 1 || w.b != out.bits[k]) return false;
    Fr b = Fr::from_u64(w.b);
    Fr factor = (Fr::one() - b) * out.qnr + b;
    if (w.x.square() != factor * (Fr::from_u64(k) + s)) return false;
  }
  return true;
}

}  // namespace vddp::randomness
