#include "vddp/randomness/laplace.hpp"

#include <mpfr.h>

#include <json.hpp>
#include <stdexcept>

namespace vddp::randomness {

namespace mp = boost::multiprecision;

namespace {

// RAII mpfr_t at a fixed precision.
struct Mpfr {
  mpfr_t v;
  explicit Mpfr(mpfr_prec_t bits) { mpfr_init2(v, bits); }
  ~Mpfr() { mpfr_clear(v); }
  Mpfr(const Mpfr&) = delete;
};

Rational exact(const Mpfr& x) {
  Rational q;
  mpfr_get_q(q.backend().data(), x.v);
  return q;
}

BigInt pow2(unsigned k) { return BigInt(1) << k; }

void check_len(std::size_t got, std::size_t want) {
  if (got != want) throw std::invalid_argument("length mismatch");
}

}  // namespace

std::string BernoulliParams::beta_string() const {
  std::string s;
  for (unsigned i = nu; i-- > 0;) s.push_back(beta[i] ? '1' : '0');
  return s;
}

namespace {

BernoulliParams from_numerator(Rational p_star, BigInt N, unsigned nu) {
  if (N <= 0 || N >= pow2(nu)) throw PrecisionCollapse();
  while ((N & 1) == 0) {
    N >>= 1;
    --nu;
  }
  BernoulliParams b;
  b.p_star = std::move(p_star);
  b.nu = nu;
  b.beta.resize(nu);
  for (unsigned i = 0; i < nu; ++i) b.beta[i] = static_cast<std::uint8_t>(bit_test(N, nu - 1 - i));
  b.realized_p = Rational(N, pow2(nu));
  return b;
}

}  // namespace

BernoulliParams make_bernoulli(const Rational& p_star, unsigned nu) {
  if (nu == 0) throw std::invalid_argument("nu must be positive");
  Rational scaled = p_star * Rational(pow2(nu)) + Rational(1, 2);
  BigInt N = mp::numerator(scaled) / mp::denominator(scaled);  // floor when positive
  return from_numerator(p_star, N, nu);
}

BernoulliParams bernoulli_from_beta(const std::string& bits) {
  if (bits.empty() || bits.find_first_not_of("01") != std::string::npos)
    throw std::invalid_argument("beta must be a non-empty 0/1 string");
  unsigned nu = unsigned(bits.size());
  BigInt N = 0;
  // bits[0] is beta[nu−1] (least significant digit of N).
  for (unsigned i = 0; i < nu; ++i)
    if (bits[nu - 1 - i] == '1') N |= BigInt(1) << (nu - 1 - i);
  Rational p(N, pow2(nu));
  return from_numerator(p, N, nu);
}

BerResult c_ber(std::span<const std::uint8_t> bits, const BernoulliParams& params) {
  check_len(bits.size(), params.nu);
  BerResult res;
  res.trace.reserve(params.nu);
  std::uint8_t r = bits[params.nu - 1] & 1;
  res.trace.push_back(r);
  for (unsigned i = params.nu - 1; i-- > 0;) {
    std::uint8_t b = bits[i] & 1;
    r = params.beta[i] ? (r | b) : (r & b);
    res.trace.push_back(r);
  }
  res.out = r;
  return res;
}

unsigned LaplaceParams::mag_offset(unsigned i) const {
  unsigned off = 1 + zero_params.nu;
  for (unsigned j = 0; j < i; ++j) off += mag_params[j].nu;
  return off;
}

namespace {

struct StarProbs {
  Rational zero;
  std::vector<Rational> mag;
  // Binary exponents e with p* in [2^{e−1}, 2^e).
  long zero_exp;
  std::vector<long> mag_exp;
};

StarProbs star_probs(const Rational& t_scale, unsigned gamma, mpfr_prec_t prec) {
  Mpfr t(prec), inv_t(prec), e(prec), num(prec), den(prec), p(prec);
  mpfr_set_q(t.v, t_scale.backend().data(), MPFR_RNDN);
  mpfr_ui_div(inv_t.v, 1, t.v, MPFR_RNDN);
  StarProbs out;
  // p_z* = (e^{1/t} − 1)/(e^{1/t} + 1); expm1 keeps precision for large t.
  mpfr_expm1(num.v, inv_t.v, MPFR_RNDN);
  mpfr_add_ui(den.v, num.v, 2, MPFR_RNDN);
  mpfr_div(p.v, num.v, den.v, MPFR_RNDN);
  out.zero = exact(p);
  out.zero_exp = mpfr_get_exp(p.v);
  for (unsigned i = 0; i < gamma; ++i) {
    // p_i* = 1/(1 + e^{2^i/t})
    mpfr_mul_2ui(e.v, inv_t.v, i, MPFR_RNDN);
    mpfr_exp(e.v, e.v, MPFR_RNDN);
    mpfr_add_ui(e.v, e.v, 1, MPFR_RNDN);
    mpfr_ui_div(p.v, 1, e.v, MPFR_RNDN);
    out.mag.push_back(exact(p));
    out.mag_exp.push_back(mpfr_get_exp(p.v));
  }
  return out;
}

mpfr_prec_t working_precision(unsigned max_nu) { return std::max<mpfr_prec_t>(64, 2 * mpfr_prec_t(max_nu) + 64); }

}  // namespace

LaplaceParams derive_bernoulli(const Rational& t_scale, unsigned gamma, unsigned nu_z,
                               const std::vector<unsigned>& nu_mag) {
  if (t_scale <= 0) throw std::invalid_argument("t_scale must be positive");
  check_len(nu_mag.size(), gamma);
  unsigned max_nu = nu_z;
  for (auto n : nu_mag) max_nu = std::max(max_nu, n);
  auto ps = star_probs(t_scale, gamma, working_precision(max_nu));
  LaplaceParams lp;
  lp.t_scale = t_scale;
  lp.gamma = gamma;
  lp.zero_params = make_bernoulli(ps.zero, nu_z);
  for (unsigned i = 0; i < gamma; ++i) lp.mag_params.push_back(make_bernoulli(ps.mag[i], nu_mag[i]));
  lp.n_lap = lp.mag_offset(gamma);
  return lp;
}

LaplaceParams derive_bernoulli(const Rational& t_scale, unsigned gamma, unsigned nu, Precision mode) {
  if (mode == Precision::absolute) return derive_bernoulli(t_scale, gamma, nu, std::vector<unsigned>(gamma, nu));
  if (t_scale <= 0) throw std::invalid_argument("t_scale must be positive");
  // Exponents only need a rough evaluation.
  auto ps = star_probs(t_scale, gamma, 64);
  auto widen = [nu](long e) { return unsigned(long(nu) + std::max(0L, -e)); };
  std::vector<unsigned> nus;
  for (auto e : ps.mag_exp) nus.push_back(widen(e));
  return derive_bernoulli(t_scale, gamma, widen(ps.zero_exp), nus);
}

void validate(const LaplaceParams& lp) {
  auto check = [](const BernoulliParams& b) {
    if (b.nu == 0 || b.beta.size() != b.nu || b.beta[b.nu - 1] != 1)
      throw std::invalid_argument("invalid Bernoulli parameters");
    Rational p = 0, w(1, 2);
    for (unsigned i = 0; i < b.nu; ++i, w /= 2)
      if (b.beta[i]) p += w;
    if (p != b.realized_p) throw std::invalid_argument("realized_p does not match beta");
  };
  if (lp.t_scale <= 0) throw std::invalid_argument("t_scale must be positive");
  check(lp.zero_params);
  if (lp.mag_params.size() != lp.gamma) throw std::invalid_argument("gamma does not match magnitude coins");
  for (auto& m : lp.mag_params) check(m);
  if (lp.n_lap != lp.mag_offset(lp.gamma)) throw std::invalid_argument("n_lap inconsistent with components");
}

LapResult c_lap(std::span<const std::uint8_t> bz_bits, std::uint8_t s_bit,
                const std::vector<std::span<const std::uint8_t>>& mag_bits, const LaplaceParams& params) {
  check_len(mag_bits.size(), params.gamma);
  LapResult res;
  res.trace.zero = c_ber(bz_bits, params.zero_params);
  res.trace.sign_bit = s_bit & 1;
  std::int64_t a = 1;
  for (unsigned i = 0; i < params.gamma; ++i) {
    res.trace.mag.push_back(c_ber(mag_bits[i], params.mag_params[i]));
    a += std::int64_t(res.trace.mag.back().out) << i;
  }
  res.trace.magnitude = a;
  std::int64_t s = 2 * std::int64_t(res.trace.sign_bit) - 1;
  res.noise = (1 - std::int64_t(res.trace.zero.out)) * s * a;
  return res;
}

LapResult c_lap_flat(std::span<const std::uint8_t> bits, const LaplaceParams& params) {
  check_len(bits.size(), params.n_lap);
  std::vector<std::span<const std::uint8_t>> mags;
  for (unsigned i = 0; i < params.gamma; ++i) mags.push_back(bits.subspan(params.mag_offset(i), params.mag_params[i].nu));
  return c_lap(bits.subspan(params.zero_offset(), params.zero_params.nu), bits[0], mags, params);
}

NoisePmf::NoisePmf(std::int64_t bound, std::vector<Rational> probs) : bound_(bound), p_(std::move(probs)) {
  check_len(p_.size(), std::size_t(2 * bound + 1));
}

const Rational& NoisePmf::at(std::int64_t r) const {
  if (r < -bound_ || r > bound_) return zero_;
  return p_[std::size_t(r + bound_)];
}

Rational NoisePmf::total() const {
  Rational s = 0;
  for (auto& x : p_) s += x;
  return s;
}

Rational noise_probability(const LaplaceParams& lp, std::int64_t r) {
  const Rational& pz = lp.zero_params.realized_p;
  if (r == 0) return pz;
  std::int64_t m = (r < 0 ? -r : r) - 1;
  if (m >= lp.max_abs()) return Rational(0);
  Rational q = (1 - pz) / 2;
  for (unsigned i = 0; i < lp.gamma; ++i) {
    auto& p = lp.mag_params[i].realized_p;
    q *= ((m >> i) & 1) ? p : 1 - p;
  }
  return q;
}

NoisePmf noise_pmf(const LaplaceParams& lp) {
  if (lp.gamma > kPmfMaxGamma) throw std::invalid_argument("gamma exceeds enumeration bound");
  // Integer counts out of 2^{ν} per coin; products are counts out of 2^{n_lap}.
  auto count = [](const BernoulliParams& b) { return BigInt(mp::numerator(b.realized_p * Rational(pow2(b.nu)))); };
  std::vector<BigInt> mag{BigInt(1)};
  for (unsigned i = 0; i < lp.gamma; ++i) {
    auto& b = lp.mag_params[i];
    BigInt one = count(b), zero = pow2(b.nu) - one;
    std::size_t half = mag.size();
    mag.resize(2 * half);
    for (std::size_t v = 0; v < half; ++v) {
      mag[v + half] = mag[v] * one;
      mag[v] *= zero;
    }
  }
  BigInt z_one = count(lp.zero_params), z_zero = pow2(lp.zero_params.nu) - z_one;
  BigInt total = pow2(lp.n_lap);
  std::int64_t bound = lp.max_abs();
  std::vector<Rational> probs(std::size_t(2 * bound + 1));
  unsigned rest = lp.n_lap - lp.zero_params.nu;  // sign bit and magnitude coins
  probs[std::size_t(bound)] = Rational(z_one * pow2(rest), total);
  for (std::size_t m = 0; m < mag.size(); ++m) {
    Rational q(z_zero * mag[m], total);
    probs[std::size_t(bound) + m + 1] = q;
    probs[std::size_t(bound) - m - 1] = q;
  }
  return NoisePmf(bound, std::move(probs));
}

std::vector<Real> ideal_laplace_pmf(const Rational& t_scale, unsigned gamma, unsigned bits) {
  std::int64_t bound = std::int64_t(1) << gamma;
  Mpfr t(bits), q(bits), p0(bits), tmp(bits), norm(bits), cur(bits);
  mpfr_set_q(t.v, t_scale.backend().data(), MPFR_RNDN);
  mpfr_ui_div(q.v, 1, t.v, MPFR_RNDN);
  mpfr_neg(q.v, q.v, MPFR_RNDN);
  mpfr_exp(q.v, q.v, MPFR_RNDN);  // q = e^{−1/t}
  // P(0) = (1 − q)/(1 + q)
  mpfr_ui_sub(tmp.v, 1, q.v, MPFR_RNDN);
  mpfr_add_ui(p0.v, q.v, 1, MPFR_RNDN);
  mpfr_div(p0.v, tmp.v, p0.v, MPFR_RNDN);
  // nonzero: (1 − P0)/2 · (1 − q) q^{m−1} / (1 − q^{2^γ})
  mpfr_pow_ui(norm.v, q.v, static_cast<unsigned long>(bound), MPFR_RNDN);
  mpfr_ui_sub(norm.v, 1, norm.v, MPFR_RNDN);
  mpfr_ui_sub(cur.v, 1, p0.v, MPFR_RNDN);
  mpfr_div_2ui(cur.v, cur.v, 1, MPFR_RNDN);
  mpfr_mul(cur.v, cur.v, tmp.v, MPFR_RNDN);
  mpfr_div(cur.v, cur.v, norm.v, MPFR_RNDN);
  std::vector<Real> out(std::size_t(2 * bound + 1));
  auto store = [&](Real& dst, const mpfr_t src) {
    mpfr_set_prec(dst.backend().data(), bits);
    mpfr_set(dst.backend().data(), src, MPFR_RNDN);
  };
  store(out[std::size_t(bound)], p0.v);
  for (std::int64_t m = 1; m <= bound; ++m) {
    store(out[std::size_t(bound + m)], cur.v);
    store(out[std::size_t(bound - m)], cur.v);
    mpfr_mul(cur.v, cur.v, q.v, MPFR_RNDN);
  }
  return out;
}

Real tv_distance(const NoisePmf& pmf, const std::vector<Real>& ideal) {
  check_len(ideal.size(), std::size_t(2 * pmf.bound() + 1));
  mpfr_prec_t prec = mpfr_get_prec(ideal[0].backend().data());
  Mpfr acc(prec), x(prec);
  mpfr_set_ui(acc.v, 0, MPFR_RNDN);
  for (std::int64_t r = -pmf.bound(); r <= pmf.bound(); ++r) {
    mpfr_set_q(x.v, pmf.at(r).backend().data(), MPFR_RNDN);
    mpfr_sub(x.v, x.v, ideal[std::size_t(r + pmf.bound())].backend().data(), MPFR_RNDN);
    mpfr_abs(x.v, x.v, MPFR_RNDN);
    mpfr_add(acc.v, acc.v, x.v, MPFR_RNDN);
  }
  mpfr_div_2ui(acc.v, acc.v, 1, MPFR_RNDN);
  Real out;
  mpfr_set_prec(out.backend().data(), prec);
  mpfr_set(out.backend().data(), acc.v, MPFR_RNDN);
  return out;
}

namespace {

nlohmann::json ber_json(const BernoulliParams& b) {
  return {{"p_star", rational_to_string(b.p_star)},
          {"nu", b.nu},
          {"beta", b.beta_string()},
          {"realized_p", rational_to_string(b.realized_p)}};
}

BernoulliParams ber_from_json(const nlohmann::json& j) {
  auto b = bernoulli_from_beta(j.at("beta").get<std::string>());
  if (b.nu != j.at("nu").get<unsigned>()) throw std::invalid_argument("config: nu does not match beta");
  if (j.contains("realized_p") && rational_from_string(j["realized_p"].get<std::string>()) != b.realized_p)
    throw std::invalid_argument("config: realized_p does not match beta");
  if (j.contains("p_star")) b.p_star = rational_from_string(j["p_star"].get<std::string>());
  return b;
}

}  // namespace

std::string to_config(const LaplaceParams& lp) {
  nlohmann::json mags = nlohmann::json::array();
  for (auto& m : lp.mag_params) mags.push_back(ber_json(m));
  nlohmann::json j{{"t_scale", rational_to_string(lp.t_scale)},
                   {"gamma", lp.gamma},
                   {"n_lap", lp.n_lap},
                   {"zero", ber_json(lp.zero_params)},
                   {"magnitude", mags}};
  return j.dump(2);
}

LaplaceParams from_config(const std::string& text) {
  LaplaceParams lp;
  try {
    auto j = nlohmann::json::parse(text);
    lp.t_scale = rational_from_string(j.at("t_scale").get<std::string>());
    lp.gamma = j.at("gamma").get<unsigned>();
    lp.zero_params = ber_from_json(j.at("zero"));
    for (auto& m : j.at("magnitude")) lp.mag_params.push_back(ber_from_json(m));
    lp.n_lap = j.at("n_lap").get<unsigned>();
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
  validate(lp);
  return lp;
}

}  // namespace vddp::randomness
