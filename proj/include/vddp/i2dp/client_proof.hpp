#pragma once

#include "vddp/sharing/sharing.hpp"
#include "vddp/sigma/protocols.hpp"

// Client proof for the Laplace mechanism: the data vector behind the
// reconstructed share commitment has 0/1 coordinates. The client posts a
// Pedersen commitment per coordinate, proves each is a bit, and proves the
// coordinates are the ones inside the vector commitment.
namespace vddp::i2dp {

using algebra::Fr;
using algebra::G1;
using commit::PublicParams;

// g^{L_k(τ)}, h^{L_k(τ)} for the Lagrange basis of the size-2^log domain,
// so a vector commitment is Π_k G_k^{x_k} H_k^{r_k}.
struct LagrangeKey {
  unsigned log_size = 0;
  std::vector<G1> G, H;
};
LagrangeKey lagrange_key(const PublicParams& pp, unsigned log_size);

struct BitVecStmt {
  G1 com;        // reconstructed data commitment
  std::size_t d = 0;
};
struct BitVecWitness {
  std::vector<Fr> x, r;  // data and total randomness vector
};

struct BitVecView {
  std::vector<G1> coords;
  std::vector<sigma::OrView> bits;
  std::vector<G1> a;  // per-coordinate nonce commitments
  G1 A;               // vector nonce commitment
  Fr c;
  std::vector<Fr> z_x, z_s, z_r;
};

bool verify_bitvec(const PublicParams& pp, const LagrangeKey& lk, const BitVecStmt& st, const BitVecView& v);
void prove_bitvec(sigma::Session& s, const PublicParams& pp, const LagrangeKey& lk, const BitVecStmt& st,
                  const BitVecWitness& w, Rng& rng);
BitVecView read_bitvec(sigma::Cursor& c, const BitVecStmt& st);
BitVecView simulate_bitvec(const PublicParams& pp, const LagrangeKey& lk, const BitVecStmt& st, Rng& rng);
void write_bitvec(sigma::Transcript& t, const BitVecStmt& st, const BitVecView& v);
sigma::Verdict run_bitvec(sigma::Session& s, const PublicParams& pp, const LagrangeKey& lk, const BitVecStmt& st,
                          const BitVecWitness& w, Rng& rng);

}  // namespace vddp::i2dp
