#pragma once

#include "vddp/sigma/protocols.hpp"

// Committed evaluation y = F(x): x and y hidden in Pedersen commitments,
// F known to the prover and committed without randomness as com_f.
namespace vddp::sigma {

struct EvscStmt {
  G1 com_y, com_x, com_f;
};
struct EvscWitness {
  Fr y, r_y, x, r_x;
  std::vector<Fr> F;
};
struct EvscView {
  G1 com_fp;           // hiding commitment to F'(X) = (y − F(X))/(x − X)
  std::size_t retries = 0;
  Fr u;
  G1 com_zp;           // Pedersen commitment to z' = F'(u)
  Fr z;                // F(u), public
  ProdView prod;       // (y − z) = (x − u)·z'
  G1 gamma_f;          // opening of com_f at u (ρ = 0)
  commit::KzgOpening open_fp;  // opening of com_fp / com_zp at u to 0
};

// A prover may ask for a fresh u only when u = x; bounded so that the
// re-challenge can not be used to shop for challenges.
inline constexpr std::size_t kEvscMaxRetries = 4;

ProdStmt evsc_prod_stmt(const PublicParams& pp, const EvscStmt& st, const Fr& u, const G1& com_zp, const Fr& z);

bool verify_evsc(const PublicParams& pp, const EvscStmt& st, const EvscView& v);
void prove_evsc(Session& s, const PublicParams& pp, const EvscStmt& st, const EvscWitness& w, Rng& rng);
EvscView read_evsc(Cursor& c, const PublicParams& pp, const EvscStmt& st);
// F is public to the simulator (it is needed to open com_f at u).
EvscView simulate_evsc(const PublicParams& pp, const EvscStmt& st, std::span<const Fr> F, Rng& rng);
void write_evsc(Transcript& t, const PublicParams& pp, const EvscStmt& st, const EvscView& v);
Verdict run_evsc(Session& s, const PublicParams& pp, const EvscStmt& st, const EvscWitness& w, Rng& rng);

}  // namespace vddp::sigma
