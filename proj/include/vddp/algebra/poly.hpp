#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "vddp/algebra/field.hpp"
#include "vddp/algebra/small_field.hpp"

namespace vddp::algebra {

// Horner evaluation of Σ coeffs[j]·x^j.
template <class F>
F poly_eval(std::span<const F> coeffs, const F& x) {
  F acc = F::zero();
  for (std::size_t i = coeffs.size(); i-- > 0;) acc = acc * x + coeffs[i];
  return acc;
}
template <class F>
F poly_eval(const std::vector<F>& coeffs, const F& x) {
  return poly_eval(std::span<const F>(coeffs), x);
}

// Multiplicative subgroup of order 2^log_size.
template <class F>
struct EvalDomain {
  unsigned log_size = 0;
  std::size_t size = 1;
  F omega = F::one();
  F omega_inv = F::one();
  F size_inv = F::one();

  F element(std::size_t i) const { return omega.pow(std::uint64_t(i % size)); }
  std::vector<F> elements() const {
    std::vector<F> out(size);
    F cur = F::one();
    for (std::size_t i = 0; i < size; ++i) {
      out[i] = cur;
      cur *= omega;
    }
    return out;
  }
  // Z(x) = x^size - 1.
  F vanishing_at(const F& x) const { return x.pow(std::uint64_t(size)) - F::one(); }
};

template <class F>
EvalDomain<F> domain_generate(unsigned m) {
  if (m > F::TWO_ADICITY) throw std::invalid_argument("unsupported domain size");
  EvalDomain<F> d;
  d.log_size = m;
  d.size = std::size_t(1) << m;
  d.omega = F::root_of_unity(m);
  d.omega_inv = d.omega.inv();
  d.size_inv = F::from_u64(d.size).inv();
  return d;
}

template <class F>
void batch_inverse(std::span<F> xs) {
  std::vector<F> prefix(xs.size());
  F acc = F::one();
  for (std::size_t i = 0; i < xs.size(); ++i) {
    prefix[i] = acc;
    acc *= xs[i];
  }
  F inv = acc.inv();
  for (std::size_t i = xs.size(); i-- > 0;) {
    F next = inv * xs[i];
    xs[i] = inv * prefix[i];
    inv = next;
  }
}

namespace detail {

template <class F>
void fft_in_place(std::vector<F>& a, const F& root) {
  const std::size_t n = a.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  // Twiddles for the largest stage; smaller stages stride through them.
  std::vector<F> tw(n / 2 ? n / 2 : 1);
  if (n >= 2) {
    tw[0] = F::one();
    for (std::size_t i = 1; i < n / 2; ++i) tw[i] = tw[i - 1] * root;
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    std::size_t half = len / 2, stride = n / len;
    for (std::size_t i = 0; i < n; i += len) {
      for (std::size_t j = 0; j < half; ++j) {
        F u = a[i + j];
        F v = a[i + j + half] * tw[j * stride];
        a[i + j] = u + v;
        a[i + j + half] = u - v;
      }
    }
  }
}

}  // namespace detail

// Interpolation: evaluations on the domain to coefficients, so that
// poly_eval(ntt(v), ω^i) = v[i].
template <class F>
std::vector<F> ntt(std::vector<F> evals, const EvalDomain<F>& d) {
  if (evals.size() != d.size) throw std::invalid_argument("ntt: length mismatch");
  detail::fft_in_place(evals, d.omega_inv);
  for (auto& c : evals) c *= d.size_inv;
  return evals;
}

// Evaluation: coefficients to evaluations on the domain (inverse of ntt).
template <class F>
std::vector<F> intt(std::vector<F> coeffs, const EvalDomain<F>& d) {
  if (coeffs.size() != d.size) throw std::invalid_argument("intt: length mismatch");
  detail::fft_in_place(coeffs, d.omega);
  return coeffs;
}

// Evaluate on the coset shift·Ω; coefficient vector is zero-padded to d.size.
template <class F>
std::vector<F> coset_evaluate(std::vector<F> coeffs, const F& shift, const EvalDomain<F>& d) {
  if (coeffs.size() > d.size) throw std::invalid_argument("coset_evaluate: polynomial too long");
  coeffs.resize(d.size, F::zero());
  F s = F::one();
  for (auto& c : coeffs) {
    c *= s;
    s *= shift;
  }
  return intt(std::move(coeffs), d);
}

template <class F>
std::vector<F> coset_interpolate(std::vector<F> evals, const F& shift, const EvalDomain<F>& d) {
  auto c = ntt(std::move(evals), d);
  F sinv = shift.inv(), s = F::one();
  for (auto& x : c) {
    x *= s;
    s *= sinv;
  }
  return c;
}

// Synthetic division by (X - x): returns (quotient, remainder = P(x)).
template <class F>
std::pair<std::vector<F>, F> divide_linear(std::span<const F> p, const F& x) {
  if (p.empty()) return {{}, F::zero()};
  std::vector<F> q(p.size() - 1);
  F carry = F::zero();
  for (std::size_t i = p.size(); i-- > 0;) {
    F cur = p[i] + carry * x;
    if (i == 0) return {std::move(q), cur};
    q[i - 1] = cur;
    carry = cur;
  }
  return {std::move(q), F::zero()};
}

template <class F>
std::vector<F> poly_add(std::span<const F> a, std::span<const F> b) {
  std::vector<F> out(std::max(a.size(), b.size()), F::zero());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) out[i] += b[i];
  return out;
}

template <class F>
std::vector<F> poly_scale(std::span<const F> a, const F& s) {
  std::vector<F> out(a.begin(), a.end());
  for (auto& c : out) c *= s;
  return out;
}

template <class F>
std::vector<F> poly_mul_naive(std::span<const F> a, std::span<const F> b) {
  if (a.empty() || b.empty()) return {};
  std::vector<F> out(a.size() + b.size() - 1, F::zero());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

// Degree of a coefficient vector, -1 for the zero polynomial.
template <class F>
long poly_degree(std::span<const F> a) {
  for (std::size_t i = a.size(); i-- > 0;)
    if (!a[i].is_zero()) return long(i);
  return -1;
}

template <class F>
struct SqrtResult {
  bool is_square = false;
  F root = F::zero();
};

namespace detail {

template <class F>
struct OddPart;

template <class Cfg>
struct OddPart<MontField<Cfg>> {
  using F = MontField<Cfg>;
  static auto q() { return shr(F::modulus_minus_one(), F::TWO_ADICITY); }
  static auto q_plus_one_half() {
    auto e = q();
    typename F::Limbs one{};
    one[0] = 1;
    add_into(e, one);
    return shr(e, 1);
  }
};

template <std::uint64_t M>
struct OddPart<SmallField<M>> {
  static std::uint64_t q() { return (M - 1) >> SmallField<M>::TWO_ADICITY; }
  static std::uint64_t q_plus_one_half() { return (q() + 1) / 2; }
};

}  // namespace detail

// Tonelli–Shanks square root with the Euler-criterion residuosity test.
template <class F>
SqrtResult<F> sqrt_witness(const F& a) {
  if (a.is_zero()) return {true, F::zero()};
  if (a.legendre() != 1) return {false, F::zero()};
  unsigned m = F::TWO_ADICITY;
  F c = F::nonresidue().pow(detail::OddPart<F>::q());
  F t = a.pow(detail::OddPart<F>::q());
  F r = a.pow(detail::OddPart<F>::q_plus_one_half());
  while (!t.is_one()) {
    unsigned i = 0;
    F t2 = t;
    while (!t2.is_one()) {
      t2 = t2.square();
      ++i;
    }
    F b = c;
    for (unsigned j = 0; j + i + 1 < m; ++j) b = b.square();
    m = i;
    c = b.square();
    t *= c;
    r *= b;
  }
  return {true, r};
}

}  // namespace vddp::algebra
