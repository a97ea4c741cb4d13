#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "vddp/accountant/accountant.hpp"
#include "vddp/algebra/poly.hpp"

// Randomized-response schemes over a cyclic subgroup 𝒳 = ⟨χ⟩ of order K.
// The response polynomial F takes the value χ^k on A_k points of the
// multiplicative subgroup Ω, so y = x·F(ω^{σ+φ}) shifts the class of x by
// k with probability A_k/|Ω|.
namespace vddp::vrr {

struct ProbabilityUnderflow : std::domain_error {
  ProbabilityUnderflow() : std::domain_error("probability underflow; increase m") {}
};

// Largest-remainder rounding of probs·M to integers summing to M; ties go
// to the lower index.
inline std::vector<std::uint64_t> quantize(const std::vector<Rational>& probs, std::uint64_t M) {
  if (probs.empty()) throw std::invalid_argument("empty probability vector");
  Rational total = 0;
  for (auto& p : probs) {
    if (p < 0) throw std::invalid_argument("negative probability");
    total += p;
  }
  if (total != 1) throw std::invalid_argument("probabilities must sum to 1");
  std::vector<std::uint64_t> A(probs.size());
  std::vector<Rational> rem(probs.size());
  std::uint64_t used = 0;
  for (std::size_t k = 0; k < probs.size(); ++k) {
    Rational s = probs[k] * Rational(BigInt(M));
    BigInt fl = numerator(s) / denominator(s);
    A[k] = fl.convert_to<std::uint64_t>();
    rem[k] = s - Rational(fl);
    used += A[k];
  }
  std::vector<std::size_t> order(probs.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return rem[a] > rem[b]; });
  for (std::size_t i = 0; used < M; ++i, ++used) ++A[order[i]];
  for (auto a : A)
    if (a == 0) throw ProbabilityUnderflow();
  return A;
}

template <class F>
struct RrSchemeT {
  unsigned K = 0;
  F chi;
  std::vector<F> chi_powers;  // χ^0 … χ^{K−1}
  std::uint64_t omega_size = 0;
  F omega;
  std::vector<std::uint64_t> A;
  std::vector<F> table;     // F(ω^i), χ^k on the k-th block of A_k indices
  std::vector<F> F_coeffs;  // degree < |Ω|
  Rational realized_ratio;
  Real realized_eps;

  bool in_subgroup(const F& x) const { return x.pow(std::uint64_t(K)).is_one(); }
  // k with χ^k = y; throws if y ∉ 𝒳.
  unsigned class_of(const F& y) const {
    for (unsigned k = 0; k < K; ++k)
      if (chi_powers[k] == y) return k;
    throw std::invalid_argument("value outside the output subgroup");
  }
  F value_at(std::uint64_t i) const { return table[i % omega_size]; }
};

// Coefficients of the polynomial of degree < M through evals[i] at ω^i.
// Power-of-two M goes through the FFT, anything else through the O(M²)
// inverse DFT.
template <class F>
std::vector<F> interpolate_on_subgroup(const std::vector<F>& evals, const F& omega) {
  const std::size_t M = evals.size();
  if (M && (M & (M - 1)) == 0 && omega == F::root_of_unity(unsigned(std::countr_zero(M)))) {
    return algebra::ntt(evals, algebra::domain_generate<F>(unsigned(std::countr_zero(M))));
  }
  F winv = omega.inv(), minv = F::from_u64(M).inv();
  std::vector<F> c(M, F::zero());
  F wj = F::one();  // ω^{−j}
  for (std::size_t j = 0; j < M; ++j) {
    F acc = F::zero(), x = F::one();
    for (std::size_t i = 0; i < M; ++i) {
      acc += evals[i] * x;
      x *= wj;
    }
    c[j] = acc * minv;
    wj *= winv;
  }
  return c;
}

template <class F>
RrSchemeT<F> build_scheme_over(unsigned K, const std::vector<Rational>& probs, std::uint64_t M, const F& omega) {
  if (K < 1 || probs.size() != K) throw std::invalid_argument("need one probability per class");
  if (!F::order_divides(K)) throw std::invalid_argument("K must divide p-1");
  if (!omega.pow(M).is_one()) throw std::invalid_argument("omega has wrong order");
  RrSchemeT<F> s;
  s.K = K;
  s.chi = F::element_of_order(K);
  s.chi_powers.resize(K);
  s.chi_powers[0] = F::one();
  for (unsigned k = 1; k < K; ++k) s.chi_powers[k] = s.chi_powers[k - 1] * s.chi;
  s.omega_size = M;
  s.omega = omega;
  s.A = quantize(probs, M);
  s.table.reserve(M);
  for (unsigned k = 0; k < K; ++k) s.table.insert(s.table.end(), s.A[k], s.chi_powers[k]);
  s.F_coeffs = interpolate_on_subgroup(s.table, omega);
  s.realized_ratio = accountant::rr_ratio(s.A, M);
  s.realized_eps = log_rational(s.realized_ratio);
  return s;
}

// y = x·F(ω^{(i_σ + i_φ) mod |Ω|}).
template <class F>
F rr_respond(const RrSchemeT<F>& s, const F& x, std::uint64_t i_sigma, std::uint64_t i_phi) {
  if (!s.in_subgroup(x)) throw std::invalid_argument("input outside the output subgroup");
  return x * s.value_at((i_sigma % s.omega_size + i_phi % s.omega_size) % s.omega_size);
}

}  // namespace vddp::vrr
