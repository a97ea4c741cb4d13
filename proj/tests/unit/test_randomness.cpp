#include <gtest/gtest.h>

#include <boost/math/distributions/chi_squared.hpp>
#include <map>

#include "vddp/common/rng.hpp"
#include "vddp/randomness/laplace.hpp"
#include "vddp/randomness/lprf.hpp"

using namespace vddp;
using namespace vddp::randomness;
using algebra::Fr;

namespace {

// Euler criterion by direct exponentiation: a^{(p−1)/2} ∈ {0, 1} means square.
bool euler_square(const Fr& a) {
  auto e = algebra::detail::shr(algebra::detail::minus_one(Fr::modulus()), 1);
  Fr v = a.pow(e);
  return v.is_zero() || v.is_one();
}

std::vector<std::uint8_t> random_bits(Rng& rng, std::size_t n) {
  std::vector<std::uint8_t> b(n);
  std::uint64_t word = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (i % 64 == 0) word = rng.next_u64();
    b[i] = (word >> (i % 64)) & 1;
  }
  return b;
}

double chi_square_critical(double dof, double alpha) {
  boost::math::chi_squared dist(dof);
  return boost::math::quantile(boost::math::complement(dist, alpha));
}

}  // namespace

TEST(Rational, DecimalStrings) {
  EXPECT_EQ(rational_to_string(Rational(3, 8)), "0.375");
  EXPECT_EQ(rational_to_string(Rational(-1, 20)), "-0.05");
  EXPECT_EQ(rational_to_string(Rational(7)), "7");
  EXPECT_EQ(rational_to_string(Rational(1, 3)), "1/3");
  EXPECT_EQ(rational_from_string("0.375"), Rational(3, 8));
  EXPECT_EQ(rational_from_string("-1.5e-2"), Rational(-3, 200));
  EXPECT_EQ(rational_from_string("10"), Rational(10));
  EXPECT_EQ(rational_from_string("2/6"), Rational(1, 3));
  EXPECT_THROW(rational_from_string("abc"), std::invalid_argument);
  Rational q(123456789, 1 << 30);
  EXPECT_EQ(rational_from_string(rational_to_string(q)), q);
  EXPECT_NEAR(log_rational(Rational(2)).convert_to<double>(), 0.6931471805599453, 1e-15);
}

// ---------------------------------------------------------------- LPRF

TEST(Lprf, ZeroIsSquare) {
  auto out = lprf_eval(Fr::zero(), 1);
  EXPECT_EQ(out.bits[0], 1);
  EXPECT_TRUE(out.witnesses[0].x.is_zero());
  EXPECT_TRUE(lprf_check(Fr::zero(), out));
}

TEST(Lprf, BitsMatchEulerCriterion) {
  Rng rng(1);
  for (int i = 0; i < 256; ++i) {
    Fr s = Fr::random(rng);
    std::uint64_t k = rng.uniform(1000);
    auto out = lprf_eval(s + Fr::from_u64(k), 1);
    EXPECT_EQ(out.bits[0], euler_square(s + Fr::from_u64(k)));
  }
}

TEST(Lprf, WitnessRelationD64) {
  Rng rng(2);
  Fr s = Fr::random(rng);
  auto out = lprf_eval(s, 64);
  ASSERT_EQ(out.bits.size(), 64u);
  EXPECT_EQ(out.qnr.legendre(), -1);
  for (std::size_t k = 0; k < 64; ++k) {
    Fr b = Fr::from_u64(out.witnesses[k].b);
    EXPECT_EQ(out.witnesses[k].x.square(), ((Fr::one() - b) * out.qnr + b) * (Fr::from_u64(k) + s));
    EXPECT_EQ(b * (Fr::one() - b), Fr::zero());
  }
  EXPECT_TRUE(lprf_check(s, out));
  EXPECT_EQ(lprf_bits(s, 64), out.bits);
  auto bad = out;
  bad.bits[3] ^= 1;
  bad.witnesses[3].b ^= 1;
  EXPECT_FALSE(lprf_check(s, bad));
  bad = out;
  bad.witnesses[5].x += Fr::one();
  EXPECT_FALSE(lprf_check(s, bad));
}

TEST(Lprf, FastPathWrapsModulus) {
  Fr s = -Fr::from_u64(2);  // s + 2 wraps to 0
  auto fast = lprf_bits(s, 5);
  EXPECT_EQ(fast, lprf_eval(s, 5).bits);
  EXPECT_EQ(fast[2], 1);
}

TEST(Lprf, OnesFractionWithin3Sigma) {
  Rng rng(3);
  std::size_t ones = 0, n = 0;
  for (int i = 0; i < 100; ++i) {
    auto bits = lprf_bits(Fr::random(rng), 100);
    for (auto b : bits) ones += b, ++n;
  }
  double frac = double(ones) / double(n), sigma = 0.5 / std::sqrt(double(n));
  EXPECT_LT(std::abs(frac - 0.5), 3 * sigma);
}

// ----------------------------------------------------------- Bernoulli

TEST(Bernoulli, FairCoin) {
  auto b = bernoulli_from_beta("1");
  EXPECT_EQ(b.realized_p, Rational(1, 2));
  for (std::uint8_t x : {0, 1}) {
    std::vector<std::uint8_t> bits{x};
    EXPECT_EQ(c_ber(bits, b).out, x);
  }
}

TEST(Bernoulli, ThreeQuarters) {
  auto b = bernoulli_from_beta("11");
  EXPECT_EQ(b.realized_p, Rational(3, 4));
  int ones = 0;
  for (int m = 0; m < 4; ++m) {
    std::vector<std::uint8_t> bits{std::uint8_t(m & 1), std::uint8_t(m >> 1)};
    ones += c_ber(bits, b).out;
  }
  EXPECT_EQ(ones, 3);
}

TEST(Bernoulli, TrailingZeroNormalized) {
  auto b = bernoulli_from_beta("01");
  EXPECT_EQ(b.nu, 1u);
  EXPECT_EQ(b.beta_string(), "1");
  EXPECT_EQ(b.realized_p, Rational(1, 2));
  EXPECT_THROW(bernoulli_from_beta("00"), PrecisionCollapse);
  EXPECT_THROW(bernoulli_from_beta("1x"), std::invalid_argument);
}

TEST(Bernoulli, ExhaustiveOnesCount) {
  Rng rng(4);
  for (int trial = 0; trial < 40; ++trial) {
    unsigned nu = 1 + unsigned(rng.uniform(12));
    Rational p(BigInt(1 + rng.uniform(9999)), BigInt(10000));
    BernoulliParams b;
    try {
      b = make_bernoulli(p, nu);
    } catch (const PrecisionCollapse&) {
      continue;
    }
    // round(2^ν p*) computed independently with doubles (no ties at these denominators).
    long expect = std::lround(std::ldexp(p.convert_to<double>(), int(nu)));
    long ones = 0;
    for (std::uint64_t m = 0; m < (1ull << b.nu); ++m) {
      std::vector<std::uint8_t> bits(b.nu);
      for (unsigned i = 0; i < b.nu; ++i) bits[i] = (m >> i) & 1;
      auto r = c_ber(bits, b);
      EXPECT_EQ(r.trace.size(), b.nu);
      EXPECT_EQ(r.trace.back(), r.out);
      ones += r.out;
    }
    EXPECT_EQ(ones << (nu - b.nu), expect) << "nu=" << nu;
    EXPECT_EQ(Rational(ones, 1ll << b.nu), b.realized_p);
  }
}

TEST(Bernoulli, LengthMismatch) {
  auto b = bernoulli_from_beta("101");
  std::vector<std::uint8_t> bits(2);
  try {
    c_ber(bits, b);
    FAIL();
  } catch (const std::invalid_argument& e) {
    EXPECT_STREQ(e.what(), "length mismatch");
  }
}

// ------------------------------------------------------------- derive

TEST(Derive, ZeroCoinAtT1) {
  auto lp = derive_bernoulli(Rational(1), 2, 24);
  // (e − 1)/(e + 1)
  EXPECT_NEAR(lp.zero_params.p_star.convert_to<double>(), 0.46211715726000974, 1e-15);
  EXPECT_NEAR(to_double(lp.zero_params.realized_p), 0.462117, 1e-6);
}

TEST(Derive, LargeScaleLimit) {
  auto lp = derive_bernoulli(Rational(1000000000), 6, 32);
  for (auto& m : lp.mag_params) EXPECT_NEAR(m.p_star.convert_to<double>(), 0.5, 1e-6);
}

TEST(Derive, MagnitudeCoinsDecreasing) {
  auto lp = derive_bernoulli(Rational(10), 8, 24);
  for (unsigned i = 1; i < 8; ++i) EXPECT_LT(lp.mag_params[i].p_star, lp.mag_params[i - 1].p_star);
  for (unsigned i = 0; i < 8; ++i) {
    double direct = 1.0 / (1.0 + std::exp(std::ldexp(1.0, int(i)) / 10.0));
    EXPECT_NEAR(lp.mag_params[i].p_star.convert_to<double>(), direct, 1e-14);
  }
  EXPECT_EQ(lp.n_lap, lp.mag_offset(8));
  validate(lp);
}

TEST(Derive, PrecisionCollapse) {
  try {
    derive_bernoulli(Rational(1), 8, 8);
    FAIL();
  } catch (const std::domain_error& e) {
    EXPECT_STREQ(e.what(), "precision collapse");
  }
  EXPECT_THROW(derive_bernoulli(Rational(0), 2, 8), std::invalid_argument);
}

TEST(Derive, ConfigRoundtrip) {
  auto lp = derive_bernoulli(Rational(10, 3), 5, 16);
  auto text = to_config(lp);
  auto back = from_config(text);
  EXPECT_EQ(back.t_scale, lp.t_scale);
  EXPECT_EQ(back.n_lap, lp.n_lap);
  EXPECT_EQ(back.zero_params.realized_p, lp.zero_params.realized_p);
  EXPECT_EQ(back.zero_params.p_star, lp.zero_params.p_star);
  for (unsigned i = 0; i < 5; ++i) EXPECT_EQ(back.mag_params[i].beta, lp.mag_params[i].beta);
  EXPECT_EQ(to_config(back), text);
  auto broken = text;
  broken.insert(broken.find("\"n_lap\": ") + 9, "1");
  EXPECT_THROW(from_config(broken), std::invalid_argument);
}

// ------------------------------------------------------------ Laplace

TEST(Laplace, ZeroingBranch) {
  auto lp = derive_bernoulli(Rational(4), 3, 8);
  Rng rng(5);
  for (int i = 0; i < 100; ++i) {
    auto bits = random_bits(rng, lp.n_lap);
    // beta[ν−1] = 1 and all-ones inputs force the zero coin to 1.
    for (unsigned j = 0; j < lp.zero_params.nu; ++j) bits[lp.zero_offset() + j] = 1;
    auto r = c_lap_flat(bits, lp);
    EXPECT_EQ(r.trace.zero.out, 1);
    EXPECT_EQ(r.noise, 0);
  }
}

TEST(Laplace, MinimalMagnitude) {
  auto lp = derive_bernoulli(Rational(4), 3, 8);
  std::vector<std::uint8_t> bits(lp.n_lap, 0);
  bits[0] = 1;  // s = +1; zero coin and magnitude coins all read 0
  auto r = c_lap_flat(bits, lp);
  EXPECT_EQ(r.trace.zero.out, 0);
  EXPECT_EQ(r.noise, 1);
  bits[0] = 0;
  EXPECT_EQ(c_lap_flat(bits, lp).noise, -1);
  EXPECT_THROW(c_lap_flat(std::span(bits).first(lp.n_lap - 1), lp), std::invalid_argument);
}

TEST(Laplace, Deterministic) {
  auto lp = derive_bernoulli(Rational(10), 6, 16);
  Rng rng(6);
  auto bits = random_bits(rng, lp.n_lap);
  auto a = c_lap_flat(bits, lp), b = c_lap_flat(bits, lp);
  EXPECT_EQ(a.noise, b.noise);
  EXPECT_EQ(a.trace.zero.trace, b.trace.zero.trace);
  for (unsigned i = 0; i < 6; ++i) EXPECT_EQ(a.trace.mag[i].trace, b.trace.mag[i].trace);
}

TEST(NoisePmf, DegenerateRange) {
  auto lp = derive_bernoulli(Rational(3), 0, 16);
  auto pmf = noise_pmf(lp);
  Rational pz = lp.zero_params.realized_p;
  EXPECT_EQ(pmf.bound(), 1);
  EXPECT_EQ(pmf.at(0), pz);
  EXPECT_EQ(pmf.at(1), (1 - pz) / 2);
  EXPECT_EQ(pmf.at(-1), (1 - pz) / 2);
  EXPECT_EQ(pmf.at(2), 0);
}

TEST(NoisePmf, NormalizedAndSymmetric) {
  Rng rng(7);
  for (int i = 0; i < 20; ++i) {
    Rational t(BigInt(1 + rng.uniform(400)), BigInt(4));
    unsigned gamma = unsigned(rng.uniform(9)), nu = 16 + unsigned(rng.uniform(3)) * 8;
    LaplaceParams lp;
    try {
      lp = derive_bernoulli(t, gamma, nu);
    } catch (const PrecisionCollapse&) {
      continue;
    }
    auto pmf = noise_pmf(lp);
    EXPECT_EQ(pmf.total(), 1);
    for (std::int64_t r = 1; r <= pmf.bound(); ++r) EXPECT_EQ(pmf.at(r), pmf.at(-r));
    // Direct product formula for a few support points.
    for (std::int64_t m = 0; m < pmf.bound(); m += 1 + pmf.bound() / 5) {
      Rational q = (1 - lp.zero_params.realized_p) / 2;
      for (unsigned j = 0; j < gamma; ++j) {
        auto& p = lp.mag_params[j].realized_p;
        q *= ((m >> j) & 1) ? p : 1 - p;
      }
      EXPECT_EQ(pmf.at(m + 1), q);
    }
  }
}

TEST(NoisePmf, CloseToIdealLaplace) {
  // Absolute 20-digit precision rounds p_8*, p_9* to zero.
  EXPECT_THROW(derive_bernoulli(Rational(10), 10, 20), PrecisionCollapse);
  auto lp = derive_bernoulli(Rational(10), 10, 20, Precision::significant);
  // Relative rounding error at most 2^{−20} on every coin.
  auto rel = [](const BernoulliParams& b) { return to_double(abs(b.realized_p - b.p_star) / b.p_star); };
  EXPECT_LE(rel(lp.zero_params), std::ldexp(1.0, -20));
  for (auto& m : lp.mag_params) EXPECT_LE(rel(m), std::ldexp(1.0, -20));
  auto pmf = noise_pmf(lp);
  auto tv = tv_distance(pmf, ideal_laplace_pmf(Rational(10), 10)).convert_to<double>();
  EXPECT_LT(tv, 10.0 * std::ldexp(1.0, -20) + 1e-40);
  EXPECT_LT(tv, 1e-4);
}

TEST(NoisePmf, EnumerationBound) {
  LaplaceParams lp;
  lp.gamma = kPmfMaxGamma + 1;
  EXPECT_THROW(noise_pmf(lp), std::invalid_argument);
}

TEST(Laplace, EmpiricalMatchesPmfChiSquare) {
  auto lp = derive_bernoulli(Rational(2), 3, 8);
  auto pmf = noise_pmf(lp);
  Rng rng(8);
  const int n = 1000000;
  std::map<std::int64_t, long> hist;
  for (int i = 0; i < n; ++i) ++hist[c_lap_flat(random_bits(rng, lp.n_lap), lp).noise];
  double stat = 0;
  int bins = 0;
  double pooled_e = 0, pooled_o = 0;
  for (std::int64_t r = -pmf.bound(); r <= pmf.bound(); ++r) {
    double e = to_double(pmf.at(r)) * n, o = double(hist[r]);
    if (e < 5) {
      pooled_e += e, pooled_o += o;
      continue;
    }
    stat += (o - e) * (o - e) / e;
    ++bins;
  }
  if (pooled_e > 0) stat += (pooled_o - pooled_e) * (pooled_o - pooled_e) / pooled_e, ++bins;
  EXPECT_LT(stat, chi_square_critical(bins - 1, 0.01));
}
