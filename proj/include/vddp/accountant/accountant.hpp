#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "vddp/randomness/laplace.hpp"

namespace vddp::accountant {

using randomness::LaplaceParams;

// The support point attaining the reported ratio, the direction of the
// ratio (false: Pr_D[r]/Pr_D'[r] with D' = D shifted by Δ), and the points
// of D's support that D' cannot produce.
struct TightWitness {
  std::int64_t r = 0;
  bool reverse = false;
  std::vector<std::int64_t> escaping;
};

struct PrivacyReport {
  Real epsilon;        // log(max_ratio)
  Rational max_ratio;  // exact e^ε
  Rational delta;
  TightWitness witness;
  // Δ·log(max single-step ratio); equals epsilon when Δ = 1.
  Real epsilon_bound;
  unsigned n_lap = 0;
  int delta_sens = 0;
};

inline constexpr unsigned kExactMaxGamma = 16;
inline constexpr unsigned kClosedFormMaxGamma = 62;

// Single-step ratios a_z and a_i.
Rational ratio_zero(const LaplaceParams& lp);
Rational ratio_mag(const LaplaceParams& lp, unsigned i);

// Closed form: δ from the Δ lowest support points, ε from the largest
// product of Δ consecutive single-step ratios (digit DP over the magnitude
// bits, plus the windows that cross 0).
PrivacyReport laplace_dp_closed_form(const LaplaceParams& lp, int delta_sens);
// Brute force over the enumerated pmf and its shift.
PrivacyReport laplace_dp_exact(const LaplaceParams& lp, int delta_sens);

// (1 − p_z)(1 + Σ 2^i p_i)
Rational expected_l1(const LaplaceParams& lp);

// Pure ε of quantized randomized response: log(max_k A_k / min_{k≥1} A_k).
Rational rr_ratio(const std::vector<std::uint64_t>& A, std::uint64_t omega_size);
Real rr_epsilon(const std::vector<std::uint64_t>& A, std::uint64_t omega_size);

struct Suggestion {
  LaplaceParams params;
  PrivacyReport report;
};

// Grid search; throws std::runtime_error with the nearest miss when no
// configuration meets both targets.
Suggestion suggest_params(double epsilon_target, const Rational& delta_target, int delta_sens);

// {epsilon, epsilon_bound, delta, n_lap, witness, ddp_tolerance}
std::string report_to_json(const PrivacyReport& r, unsigned n_servers = 1);

}  // namespace vddp::accountant
