#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vddp/algebra/curve.hpp"
#include "vddp/algebra/field.hpp"
#include "vddp/common/hash.hpp"

namespace vddp::commit {

using algebra::Fr;
using algebra::G1;
using algebra::G1Affine;
using algebra::G2;

// Commitment key: g^{τ^j}, h^{τ^j} for j ≤ max_degree, plus g2 and g2^τ.
// τ is derived from a seed; it is only kept when retain_trapdoor is set
// (tests use it as an oracle).
struct PublicParams {
  std::size_t max_degree = 0;
  std::vector<G1Affine> g_powers;
  std::vector<G1Affine> h_powers;
  G1 g, h;
  G2 g2, g2_tau;
  std::optional<Fr> trapdoor;
  Digest fingerprint{};

  std::shared_ptr<const algebra::FixedBaseTable> g_table, h_table;
};

PublicParams setup(std::size_t max_degree, std::span<const std::uint8_t> seed, bool retain_trapdoor = false);
PublicParams setup(std::size_t max_degree, std::string_view seed, bool retain_trapdoor = false);

// Randomized pairing self-check of the powers against g2_tau.
bool check_consistency(const PublicParams& pp, Rng& rng);
// Direct check e(g_powers[j], g2_tau) = e(g_powers[j+1], g2) for one j.
bool check_consistency_at(const PublicParams& pp, std::size_t j);

Bytes serialize_params(const PublicParams& pp);
PublicParams deserialize_params(std::span<const std::uint8_t> data);
void save_params(const PublicParams& pp, const std::string& path);
PublicParams load_params(const std::string& path);

using Commitment = G1;

// g^x h^r.
G1 pedersen_commit(const Fr& x, const Fr& r, const PublicParams& pp);
// g^x alone (public values committed with zero randomness).
G1 g_mul(const Fr& x, const PublicParams& pp);
G1 h_mul(const Fr& r, const PublicParams& pp);

struct KzgOpening {
  Fr rho;     // R(x)
  G1 gamma;   // g^{qF(τ)} h^{qR(τ)}

  static constexpr std::size_t kBytes = 32 + G1::kBytes;
  Bytes to_bytes() const;
  static KzgOpening from_bytes(std::span<const std::uint8_t> b);
};

struct DegreeOverflow : std::invalid_argument {
  DegreeOverflow() : std::invalid_argument("degree overflow") {}
};

// g^{F(τ)} h^{R(τ)}; R may be empty (public polynomial).
G1 kzg_commit(std::span<const Fr> F, std::span<const Fr> R, const PublicParams& pp);

struct KzgEval {
  Fr y;
  KzgOpening opening;
};
KzgEval kzg_open(std::span<const Fr> F, std::span<const Fr> R, const Fr& x, const PublicParams& pp);

// e(γ, g2^τ · g2^{-x}) = e(com · g^{-y} · h^{-ρ}, g2).
bool kzg_verify(const G1& com, const Fr& x, const Fr& y, const KzgOpening& op, const PublicParams& pp);

struct KzgClaim {
  G1 com;
  Fr x, y;
  KzgOpening opening;
};
// All claims checked with one two-term pairing product, combined by a
// challenge hashed from the claims.
bool kzg_batch_verify(std::span<const KzgClaim> claims, const PublicParams& pp);

}  // namespace vddp::commit
