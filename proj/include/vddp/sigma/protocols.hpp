#pragma once

#include "vddp/commit/commit.hpp"
#include "vddp/sigma/transcript.hpp"

// Sigma protocols over Pedersen commitments g^v h^r. Each protocol comes
// as: a statement, a view (what the verifier saw), a pure verify_*, a
// prove_* that talks through a Session, read_* to parse a view back from a
// transcript, simulate_* (no witness) and write_* to lay a view out as a
// transcript. run_* glues prove, read and verify together.
namespace vddp::sigma {

using algebra::G1;
using commit::PublicParams;

// ---- opening: know (x, r) with com = g^x h^r ----
struct OpeningStmt {
  G1 com;
};
struct OpeningWitness {
  Fr x, r;
};
struct OpeningView {
  G1 a;
  Fr c;
  Fr s1, s2;
};
bool verify_opening(const PublicParams& pp, const OpeningStmt& st, const OpeningView& v);
void prove_opening(Session& s, const PublicParams& pp, const OpeningStmt& st, const OpeningWitness& w, Rng& rng);
OpeningView read_opening(Cursor& c, const OpeningStmt& st);
OpeningView simulate_opening(const PublicParams& pp, const OpeningStmt& st, Rng& rng);
void write_opening(Transcript& t, const OpeningStmt& st, const OpeningView& v);
Verdict run_opening(Session& s, const PublicParams& pp, const OpeningStmt& st, const OpeningWitness& w, Rng& rng);
// Special soundness: two accepting views with equal a and distinct c.
OpeningWitness extract_opening(const OpeningView& v1, const OpeningView& v2);

// ---- product: committed y = z·x ----
// Openings of com_x and com_z, and com_y = com_z^x h^{r'} with r' = r_y − x·r_z,
// under one challenge so that the x-responses coincide. With y public pass
// com_y = g^y and r_y = 0.
struct ProdStmt {
  G1 com_y, com_z, com_x;
};
struct ProdWitness {
  Fr y, r_y, z, r_z, x, r_x;
};
struct ProdView {
  G1 a_x, a_z, a_y;
  Fr c;
  Fr s_x, s_rx, s_z, s_rz, s_r;
};
bool verify_prod(const PublicParams& pp, const ProdStmt& st, const ProdView& v);
void prove_prod(Session& s, const PublicParams& pp, const ProdStmt& st, const ProdWitness& w, Rng& rng);
ProdView read_prod(Cursor& c, const ProdStmt& st);
ProdView simulate_prod(const PublicParams& pp, const ProdStmt& st, Rng& rng);
void write_prod(Transcript& t, const ProdStmt& st, const ProdView& v);
Verdict run_prod(Session& s, const PublicParams& pp, const ProdStmt& st, const ProdWitness& w, Rng& rng);
ProdWitness extract_prod(const ProdView& v1, const ProdView& v2);

// ---- bit: com opens to 0 or 1 (CDS disjunction over base h) ----
struct OrStmt {
  G1 com;
};
struct OrWitness {
  Fr b, r;
};
struct OrView {
  G1 a0, a1;
  Fr c;
  Fr c0, s0, s1;  // c1 = c − c0
};
bool verify_or(const PublicParams& pp, const OrStmt& st, const OrView& v);
void prove_or(Session& s, const PublicParams& pp, const OrStmt& st, const OrWitness& w, Rng& rng);
OrView read_or(Cursor& c, const OrStmt& st);
OrView simulate_or(const PublicParams& pp, const OrStmt& st, Rng& rng);
void write_or(Transcript& t, const OrStmt& st, const OrView& v);
Verdict run_or(Session& s, const PublicParams& pp, const OrStmt& st, const OrWitness& w, Rng& rng);

// ---- equality: com_ped = g^v h^r and com_kzg = g^v Π h_j^{R_j} ----
// com_kzg is a hiding KZG commitment to the constant v with randomness
// polynomial R of public length r_len.
struct EqStmt {
  G1 com_ped, com_kzg;
  std::size_t r_len = 1;
};
struct EqWitness {
  Fr v, r;
  std::vector<Fr> R;
};
struct EqView {
  G1 a1, a2;
  Fr c;
  Fr s_v, s_r;
  std::vector<Fr> s_R;
};
bool verify_eq(const PublicParams& pp, const EqStmt& st, const EqView& v);
void prove_eq(Session& s, const PublicParams& pp, const EqStmt& st, const EqWitness& w, Rng& rng);
EqView read_eq(Cursor& c, const EqStmt& st);
EqView simulate_eq(const PublicParams& pp, const EqStmt& st, Rng& rng);
void write_eq(Transcript& t, const EqStmt& st, const EqView& v);
Verdict run_eq(Session& s, const PublicParams& pp, const EqStmt& st, const EqWitness& w, Rng& rng);

// ---- discrete log over h: P = h^r ----
struct DlogStmt {
  G1 P;
};
struct DlogView {
  G1 a;
  Fr c, s;
};
bool verify_dlog(const PublicParams& pp, const DlogStmt& st, const DlogView& v);
void prove_dlog(Session& s, const PublicParams& pp, const DlogStmt& st, const Fr& r, Rng& rng);
DlogView read_dlog(Cursor& c, const DlogStmt& st);
DlogView simulate_dlog(const PublicParams& pp, const DlogStmt& st, Rng& rng);
void write_dlog(Transcript& t, const DlogStmt& st, const DlogView& v);
Verdict run_dlog(Session& s, const PublicParams& pp, const DlogStmt& st, const Fr& r, Rng& rng);

// Parses the view from s.transcript() starting at `from` and verifies it.
// Malformed messages reject.
template <class Stmt, class ReadFn, class VerifyFn>
Verdict check_from(const Session& s, std::size_t from, const Stmt& st, ReadFn read, VerifyFn verify) {
  try {
    Cursor c(s.transcript(), from);
    auto v = read(c, st);
    return verify(v) ? Verdict::accept() : Verdict::reject("verification equation failed");
  } catch (const DecodeError& e) {
    return Verdict::reject(std::string("malformed message: ") + e.what());
  }
}

}  // namespace vddp::sigma
