#pragma once

#include <span>
#include <utility>

#include "vddp/algebra/curve.hpp"

namespace vddp::algebra {

// Optimal ate pairing on BLS12-381.
GT pairing(const G1& p, const G2& q);

// Π e(p_i, q_i) with a shared Miller-loop accumulator and a single final
// exponentiation.
GT multi_pairing(std::span<const G1> ps, std::span<const G2> qs);

// True iff Π e(p_i, q_i) = 1.
bool pairing_product_is_one(std::span<const G1> ps, std::span<const G2> qs);

namespace detail {
Fp12 miller_loop(std::span<const G1Affine> ps, std::span<const G2Affine> qs);
Fp12 final_exponentiation(const Fp12& f);
}  // namespace detail

}  // namespace vddp::algebra
