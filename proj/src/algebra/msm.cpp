#include <stdexcept>
#include <vector>

#include "vddp/algebra/curve.hpp"

namespace vddp::algebra {

using detail::Jacobian;

namespace {

unsigned window_bits(std::size_t n) {
  unsigned best = 2;
  double best_cost = 1e300;
  for (unsigned c = 2; c <= 16; ++c) {
    double cost = double((255 + c - 1) / c) * (double(n) + double(1u << c));
    if (cost < best_cost) {
      best_cost = cost;
      best = c;
    }
  }
  return best;
}

unsigned digit_at(const Fr::Limbs& l, unsigned off, unsigned c) {
  unsigned li = off / 64, bi = off % 64;
  u64 v = li < 4 ? l[li] >> bi : 0;
  if (bi + c > 64 && li + 1 < 4) v |= l[li + 1] << (64 - bi);
  return unsigned(v & ((u64(1) << c) - 1));
}

}  // namespace

G1 msm(std::span<const G1Affine> bases, std::span<const Fr> scalars) {
  if (bases.size() != scalars.size()) throw std::invalid_argument("msm: length mismatch");
  const std::size_t n = bases.size();
  op_counts().g1_exp += n;
  if (n < 16) {
    Jacobian<Fp> acc = Jacobian<Fp>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
      auto l = scalars[i].to_limbs();
      acc = acc.add(Jacobian<Fp>::from_affine(bases[i]).mul(l));
    }
    return G1(acc);
  }
  std::vector<Fr::Limbs> ls(n);
  for (std::size_t i = 0; i < n; ++i) ls[i] = scalars[i].to_limbs();
  const unsigned c = window_bits(n);
  const unsigned windows = (255 + c - 1) / c;
  std::vector<Jacobian<Fp>> buckets(std::size_t(1) << c);
  Jacobian<Fp> result = Jacobian<Fp>::infinity();
  for (unsigned w = windows; w-- > 0;) {
    for (unsigned k = 0; k < c; ++k) result = result.dbl();
    std::fill(buckets.begin(), buckets.end(), Jacobian<Fp>::infinity());
    for (std::size_t i = 0; i < n; ++i) {
      unsigned d = digit_at(ls[i], w * c, c);
      if (d) buckets[d] = buckets[d].add_mixed(bases[i]);
    }
    Jacobian<Fp> running = Jacobian<Fp>::infinity(), acc = Jacobian<Fp>::infinity();
    for (std::size_t d = buckets.size() - 1; d >= 1; --d) {
      running = running.add(buckets[d]);
      acc = acc.add(running);
    }
    result = result.add(acc);
  }
  return G1(result);
}

G1 msm(std::span<const G1> bases, std::span<const Fr> scalars) {
  auto aff = G1::batch_to_affine(bases);
  return msm(std::span<const G1Affine>(aff), scalars);
}

}  // namespace vddp::algebra
