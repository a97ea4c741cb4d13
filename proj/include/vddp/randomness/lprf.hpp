#pragma once

#include <cstdint>
#include <vector>

#include "vddp/algebra/field.hpp"

namespace vddp::randomness {

using algebra::Fr;

// Legendre PRF: bit k is 1 iff k + s is a square in Fr (zero counts as a
// square). Each bit carries a witness x with x^2 = ((1−b)·qnr + b)(k+s).
struct LprfWitness {
  Fr x;
  std::uint8_t b;
};

struct LprfOutput {
  std::vector<std::uint8_t> bits;
  std::vector<LprfWitness> witnesses;
  Fr qnr;
};

// Fixed quadratic non-residue used by the witnesses.
const Fr& lprf_qnr();

LprfOutput lprf_eval(const Fr& s, std::size_t d);
// Same bits without witnesses (GMP Legendre symbol, much faster).
std::vector<std::uint8_t> lprf_bits(const Fr& s, std::size_t d);
// Checks every witness relation and bit validity.
bool lprf_check(const Fr& s, const LprfOutput& out);

}  // namespace vddp::randomness
