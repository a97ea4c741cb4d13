#include "vddp/common/rational.hpp"

#include <stdexcept>

namespace vddp {

namespace mp = boost::multiprecision;

std::string rational_to_string(const Rational& q) {
  BigInt num = mp::numerator(q), den = mp::denominator(q);
  if (den == 1) return num.str();
  unsigned twos = 0, fives = 0;
  BigInt d = den;
  while (d % 2 == 0) d /= 2, ++twos;
  while (d % 5 == 0) d /= 5, ++fives;
  if (d != 1) return num.str() + "/" + den.str();
  unsigned digits = std::max(twos, fives);
  BigInt scale = mp::pow(BigInt(10), digits);
  BigInt scaled = mp::abs(num) * scale / den;
  std::string s = scaled.str();
  if (s.size() <= digits) s.insert(0, digits + 1 - s.size(), '0');
  s.insert(s.size() - digits, ".");
  return (num < 0 ? "-" : "") + s;
}

Rational rational_from_string(const std::string& text) {
  if (text.empty()) throw std::invalid_argument("empty rational");
  auto slash = text.find('/');
  try {
    if (slash != std::string::npos) {
      auto strip = [](std::string t) {
        std::size_t sign = (!t.empty() && t[0] == '-') ? 1 : 0;
        auto nz = t.find_first_not_of('0', sign);
        if (nz == std::string::npos) nz = t.size() - 1;
        return t.substr(0, sign) + t.substr(std::max(nz, sign));
      };
      BigInt num(strip(text.substr(0, slash))), den(strip(text.substr(slash + 1)));
      if (den == 0) throw std::invalid_argument("zero denominator");
      return Rational(num, den);
    }
    std::string s = text;
    long exp10 = 0;
    auto e = s.find_first_of("eE");
    if (e != std::string::npos) {
      exp10 = std::stol(s.substr(e + 1));
      s = s.substr(0, e);
    }
    bool neg = !s.empty() && s[0] == '-';
    if (neg || (!s.empty() && s[0] == '+')) s = s.substr(1);
    auto dot = s.find('.');
    if (dot != std::string::npos) {
      exp10 -= long(s.size() - dot - 1);
      s.erase(dot, 1);
    }
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
      throw std::invalid_argument("bad rational '" + text + "'");
    s.erase(0, std::min(s.find_first_not_of('0'), s.size() - 1));  // a leading 0 would parse as octal
    Rational q{BigInt(s)};
    BigInt p = mp::pow(BigInt(10), unsigned(std::labs(exp10)));
    q = exp10 >= 0 ? q * p : q / p;
    return neg ? Rational(-q) : q;
  } catch (const std::runtime_error&) {
    throw std::invalid_argument("bad rational '" + text + "'");
  }
}

Real to_real(const Rational& q, unsigned bits) {
  Real r;
  r.precision(bits * 30103 / 100000 + 2);
  mpfr_set_prec(r.backend().data(), bits);
  mpfr_set_q(r.backend().data(), q.backend().data(), MPFR_RNDN);
  return r;
}

Rational to_rational(const Real& x) {
  Rational q;
  mpfr_get_q(q.backend().data(), x.backend().data());
  return q;
}

Real log_rational(const Rational& q, unsigned bits) {
  if (q <= 0) throw std::domain_error("log of non-positive rational");
  Real r = to_real(q, bits + 16);
  mpfr_log(r.backend().data(), r.backend().data(), MPFR_RNDN);
  return r;
}

double to_double(const Rational& q) { return q.convert_to<double>(); }

}  // namespace vddp
