#pragma once

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/mpfr.hpp>
#include <string>

namespace vddp {

using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational, boost::multiprecision::et_off>;
using BigInt = boost::multiprecision::number<boost::multiprecision::gmp_int, boost::multiprecision::et_off>;
// Variable-precision real; set digits with Real::default_precision or
// per-value via Real(x, digits10).
using Real = boost::multiprecision::mpfr_float;

// Exact decimal when the denominator is of the form 2^a 5^b, else "num/den".
std::string rational_to_string(const Rational& q);
// Accepts "a/b", integers and finite decimals such as "-0.125" or "1e-3".
Rational rational_from_string(const std::string& s);

// Nearest Real at `bits` bits of precision, and the exact inverse.
Real to_real(const Rational& q, unsigned bits = 256);
Rational to_rational(const Real& x);

// ln(q) at the given number of bits; q > 0.
Real log_rational(const Rational& q, unsigned bits = 256);
double to_double(const Rational& q);

}  // namespace vddp
