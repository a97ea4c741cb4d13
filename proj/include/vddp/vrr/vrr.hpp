#pragma once

#include "vddp/sigma/evsc.hpp"
#include "vddp/vrr/scheme.hpp"

namespace vddp::vrr {

using algebra::Fr;
using algebra::G1;
using commit::PublicParams;

using RrScheme = RrSchemeT<Fr>;

// Scheme over Fr with |Ω| = 2^m.
RrScheme build_scheme(unsigned K, const std::vector<Rational>& probs, unsigned m);
// Closest K' ≥ 2 dividing p − 1 (ties go to the smaller one).
unsigned nearest_admissible_k(unsigned K);

// Scheme plus the public commitments both sides need: g^{F(τ)} and
// g^{τ^{|Ω|} − 1}. Built once; per-client verification then costs O(1)
// group operations.
struct VrrContext {
  const RrScheme* scheme = nullptr;
  const PublicParams* pp = nullptr;
  G1 com_F, com_F_omega;
};
VrrContext make_context(const RrScheme& scheme, const PublicParams& pp);

struct VrrClient {
  Fr x, r_x;
  std::uint64_t i_sigma = 0;
  Fr sigma;  // ω^{i_σ} for honest clients
  Fr r_sigma;
  G1 com, psi;
};
VrrClient make_client(const VrrContext& ctx, const Fr& x, std::uint64_t i_sigma, Rng& rng);
// ψ commits to an arbitrary σ (normally outside Ω).
VrrClient make_client_with_sigma(const VrrContext& ctx, const Fr& x, const Fr& sigma, Rng& rng);

struct VrrStmt {
  G1 com, psi;
  std::uint64_t i_phi = 0;
};

struct VrrView {
  Fr y;
  G1 com_z;
  Fr alpha;
  sigma::EvscView evsc;
  sigma::ProdView prod;
};

// Cheating provers for the soundness suite. bad_y: send y·χ. bad_com_z:
// commit to a z other than F(t). outside_domain: for a client whose σ is
// outside Ω, claim z = 1 (output = input).
enum class VrrCheat { none, bad_y, bad_com_z, outside_domain };

// com_t = ψ^{ω^{i_φ}}.
G1 vrr_com_t(const VrrContext& ctx, const VrrStmt& st);
sigma::EvscStmt vrr_evsc_stmt(const VrrContext& ctx, const VrrStmt& st, const G1& com_z, const Fr& alpha);
sigma::ProdStmt vrr_prod_stmt(const VrrContext& ctx, const VrrStmt& st, const Fr& y, const G1& com_z);

void prove_vrr(sigma::Session& s, const VrrContext& ctx, const VrrStmt& st, const VrrClient& c, Rng& rng,
               VrrCheat cheat = VrrCheat::none);
VrrView read_vrr(sigma::Cursor& c, const VrrContext& ctx, const VrrStmt& st);
// y ∈ 𝒳 first, then the EvSc and product proofs.
sigma::Verdict verify_vrr(const VrrContext& ctx, const VrrStmt& st, const VrrView& v);
VrrView simulate_vrr(const VrrContext& ctx, const VrrStmt& st, const Fr& y, Rng& rng);
void write_vrr(sigma::Transcript& t, const VrrContext& ctx, const VrrStmt& st, const VrrView& v);

struct VrrOutcome {
  sigma::Verdict verdict;
  Fr y;
};
VrrOutcome run_vrr(sigma::Session& s, const VrrContext& ctx, const VrrStmt& st, const VrrClient& c, Rng& rng,
                   VrrCheat cheat = VrrCheat::none);

// Unbiased histogram estimate: solves C·n̂ = observed with
// C[k][j] = A_{(k−j) mod K}/|Ω|, exactly. Singular C throws.
std::vector<Rational> histogram_estimate(const std::vector<Rational>& observed, const std::vector<std::uint64_t>& A,
                                         std::uint64_t omega_size);
std::vector<Rational> histogram_estimate(const std::vector<std::uint64_t>& observed,
                                         const std::vector<std::uint64_t>& A, std::uint64_t omega_size);

}  // namespace vddp::vrr
