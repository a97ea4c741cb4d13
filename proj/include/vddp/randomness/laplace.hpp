#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "vddp/common/rational.hpp"

namespace vddp::randomness {

// Bernoulli coin built from ν fair bits. beta[i] is the (i+1)-th binary
// digit of the realized probability, so realized_p = Σ beta[i]·2^{−(i+1)},
// and beta[nu−1] = 1.
struct BernoulliParams {
  Rational p_star;
  unsigned nu = 0;
  std::vector<std::uint8_t> beta;
  Rational realized_p;

  // Bitset order: the first character is beta[nu−1], the last beta[0].
  std::string beta_string() const;
};

struct PrecisionCollapse : std::domain_error {
  PrecisionCollapse() : std::domain_error("precision collapse") {}
};

// Rounds p* to round(2^ν p*)/2^ν and drops trailing zero digits (which
// lowers ν). Throws PrecisionCollapse if the result is 0 or 1.
BernoulliParams make_bernoulli(const Rational& p_star, unsigned nu);
// From a bitset-order string; normalized the same way.
BernoulliParams bernoulli_from_beta(const std::string& bits);

struct BerResult {
  std::uint8_t out;
  std::vector<std::uint8_t> trace;  // r after each fold step; trace.back() == out
};

// r ← bits[ν−1]; for i = ν−2..0: r ← β_i ? r ∨ bits[i] : r ∧ bits[i].
BerResult c_ber(std::span<const std::uint8_t> bits, const BernoulliParams& params);

// Parameters of the sampling circuit for the discrete Laplace with scale t:
// zero coin p_z* = (e^{1/t} − 1)/(e^{1/t} + 1), magnitude coins
// p_i* = 1/(1 + e^{2^i/t}) for i < gamma.
struct LaplaceParams {
  Rational t_scale;
  unsigned gamma = 0;
  BernoulliParams zero_params;
  std::vector<BernoulliParams> mag_params;
  unsigned n_lap = 0;  // ν_z + 1 + Σ ν_i

  // Bit layout of one sample: [sign][zero coin][mag 0]...[mag γ−1].
  unsigned zero_offset() const { return 1; }
  unsigned mag_offset(unsigned i) const;
  std::int64_t max_abs() const { return std::int64_t(1) << gamma; }
};

// How a single precision ν is applied to every coin. absolute: ν binary
// digits after the point. significant: ν digits after the leading zeros of
// p*, so tiny p_i* (large i) never round to 0.
enum class Precision { absolute, significant };

// Working precision is max(64, 2·max ν + 64) bits.
LaplaceParams derive_bernoulli(const Rational& t_scale, unsigned gamma, unsigned nu_z,
                               const std::vector<unsigned>& nu_mag);
LaplaceParams derive_bernoulli(const Rational& t_scale, unsigned gamma, unsigned nu,
                               Precision mode = Precision::absolute);
// Rebuilds derived fields (n_lap) and checks invariants.
void validate(const LaplaceParams& params);

struct LapTrace {
  BerResult zero;
  std::uint8_t sign_bit;
  std::vector<BerResult> mag;
  std::int64_t magnitude;  // a = 1 + Σ 2^i·mag[i].out
};

struct LapResult {
  std::int64_t noise;
  LapTrace trace;
};

LapResult c_lap(std::span<const std::uint8_t> bz_bits, std::uint8_t s_bit,
                const std::vector<std::span<const std::uint8_t>>& mag_bits, const LaplaceParams& params);
// Flat n_lap-bit input in the layout above.
LapResult c_lap_flat(std::span<const std::uint8_t> bits, const LaplaceParams& params);

// Exact pmf over [−2^γ, 2^γ]. All probabilities are multiples of 2^{−n_lap}.
class NoisePmf {
 public:
  NoisePmf(std::int64_t bound, std::vector<Rational> probs);
  std::int64_t bound() const { return bound_; }
  const Rational& at(std::int64_t r) const;
  Rational total() const;

 private:
  std::int64_t bound_;
  std::vector<Rational> p_;
  Rational zero_{0};
};

// Probability of a single value from the product formula (no enumeration).
Rational noise_probability(const LaplaceParams& params, std::int64_t r);

inline constexpr unsigned kPmfMaxGamma = 24;
NoisePmf noise_pmf(const LaplaceParams& params);

// Lap_Z(t) with the nonzero part truncated to |r| ≤ 2^γ and renormalized;
// P(0) is untouched. Returned as doubles-in-Real for TV comparisons.
std::vector<Real> ideal_laplace_pmf(const Rational& t_scale, unsigned gamma, unsigned bits = 256);
Real tv_distance(const NoisePmf& pmf, const std::vector<Real>& ideal);

// Config block (JSON text): rationals as decimal strings, β as bitsets.
std::string to_config(const LaplaceParams& params);
LaplaceParams from_config(const std::string& json_text);

}  // namespace vddp::randomness
