#include "vddp/sigma/evsc.hpp"

#include "vddp/algebra/poly.hpp"

namespace vddp::sigma {

using commit::kzg_commit;
using commit::kzg_open;
using commit::KzgOpening;
using commit::pedersen_commit;

namespace {

// com_fp is opened exactly once, so a degree-1 blinding polynomial keeps
// both the commitment and the opening uniformly distributed.
constexpr std::size_t kBlindLen = 2;

Bytes stmt_bytes(const EvscStmt& st) { return pack(st.com_y, st.com_x, st.com_f); }

std::vector<Fr> random_vec(Rng& rng, std::size_t n) {
  std::vector<Fr> v(n);
  for (auto& x : v) x = Fr::random(rng);
  return v;
}

// F'(X) = (F(X) − F(x))/(X − x); returns at least one coefficient.
std::vector<Fr> quotient(std::span<const Fr> F, const Fr& x) {
  auto q = algebra::divide_linear<Fr>(F, x).first;
  if (q.empty()) q.push_back(Fr::zero());
  return q;
}

std::pair<std::vector<Fr>, std::vector<Fr>> shift_constant(std::vector<Fr> F, std::vector<Fr> R, const Fr& z,
                                                           const Fr& r) {
  F[0] -= z;
  R[0] -= r;
  return {std::move(F), std::move(R)};
}

}  // namespace

ProdStmt evsc_prod_stmt(const PublicParams& pp, const EvscStmt& st, const Fr& u, const G1& com_zp, const Fr& z) {
  return {st.com_y - commit::g_mul(z, pp), com_zp, st.com_x - commit::g_mul(u, pp)};
}

bool verify_evsc(const PublicParams& pp, const EvscStmt& st, const EvscView& v) {
  if (v.retries > kEvscMaxRetries) return false;
  if (!verify_prod(pp, evsc_prod_stmt(pp, st, v.u, v.com_zp, v.z), v.prod)) return false;
  std::vector<commit::KzgClaim> claims{
      {st.com_f, v.u, v.z, KzgOpening{Fr::zero(), v.gamma_f}},
      {v.com_fp - v.com_zp, v.u, Fr::zero(), v.open_fp},
  };
  return commit::kzg_batch_verify(claims, pp);
}

void prove_evsc(Session& s, const PublicParams& pp, const EvscStmt& st, const EvscWitness& w, Rng& rng) {
  s.statement("evsc.stmt", stmt_bytes(st));
  // (y − F(X))/(x − X) = (F(X) − y)/(X − x) when y = F(x).
  auto Fp = quotient(w.F, w.x);
  auto Rp = random_vec(rng, kBlindLen);
  s.send("evsc.com_fp", pack(kzg_commit(Fp, Rp, pp)));
  Fr u = s.challenge("evsc.u");
  for (std::size_t n = 0; u == w.x && n < kEvscMaxRetries; ++n) {
    s.send("evsc.retry", {});
    u = s.challenge("evsc.u");
  }
  Fr zp = algebra::poly_eval<Fr>(Fp, u), r_zp = Fr::random(rng);
  Fr z = algebra::poly_eval<Fr>(w.F, u);
  G1 com_zp = pedersen_commit(zp, r_zp, pp);
  s.send("evsc.z", pack(com_zp, z));
  ProdWitness pw{w.y - z, w.r_y, zp, r_zp, w.x - u, w.r_x};
  prove_prod(s, pp, evsc_prod_stmt(pp, st, u, com_zp, z), pw, rng);
  auto ef = kzg_open(w.F, {}, u, pp);
  s.send("evsc.open_f", pack(ef.opening.gamma));
  auto [F2, R2] = shift_constant(Fp, Rp, zp, r_zp);
  auto e2 = kzg_open(F2, R2, u, pp);
  s.send("evsc.open_fp", e2.opening.to_bytes());
}

EvscView read_evsc(Cursor& c, const PublicParams& pp, const EvscStmt& st) {
  c.statement("evsc.stmt", stmt_bytes(st));
  EvscView v;
  unpack(c.prover("evsc.com_fp"), v.com_fp);
  v.u = c.challenge("evsc.u");
  while (c.next_is(Role::prover, "evsc.retry")) {
    if (!c.prover("evsc.retry").empty()) throw DecodeError("evsc: retry carries data");
    if (++v.retries > kEvscMaxRetries) throw DecodeError("evsc: too many re-challenges");
    v.u = c.challenge("evsc.u");
  }
  unpack(c.prover("evsc.z"), v.com_zp, v.z);
  v.prod = read_prod(c, evsc_prod_stmt(pp, st, v.u, v.com_zp, v.z));
  unpack(c.prover("evsc.open_f"), v.gamma_f);
  v.open_fp = KzgOpening::from_bytes(c.prover("evsc.open_fp"));
  return v;
}

EvscView simulate_evsc(const PublicParams& pp, const EvscStmt& st, std::span<const Fr> F, Rng& rng) {
  EvscView v;
  std::size_t n = std::max<std::size_t>(1, F.empty() ? 1 : F.size() - 1);
  auto Fs = random_vec(rng, n), Rs = random_vec(rng, kBlindLen);
  v.com_fp = kzg_commit(Fs, Rs, pp);
  v.u = Fr::random(rng);
  Fr zp = algebra::poly_eval<Fr>(Fs, v.u), r_zp = Fr::random(rng);
  v.com_zp = pedersen_commit(zp, r_zp, pp);
  v.z = algebra::poly_eval<Fr>(F, v.u);
  v.prod = simulate_prod(pp, evsc_prod_stmt(pp, st, v.u, v.com_zp, v.z), rng);
  std::vector<Fr> Fv(F.begin(), F.end());
  v.gamma_f = kzg_open(Fv, {}, v.u, pp).opening.gamma;
  auto [F2, R2] = shift_constant(Fs, Rs, zp, r_zp);
  v.open_fp = kzg_open(F2, R2, v.u, pp).opening;
  return v;
}

void write_evsc(Transcript& t, const PublicParams& pp, const EvscStmt& st, const EvscView& v) {
  t.append(Role::statement, "evsc.stmt", stmt_bytes(st));
  t.append(Role::prover, "evsc.com_fp", pack(v.com_fp));
  auto ub = v.u.to_bytes();
  t.append(Role::verifier, "evsc.u", Bytes(ub.begin(), ub.end()));
  t.append(Role::prover, "evsc.z", pack(v.com_zp, v.z));
  write_prod(t, evsc_prod_stmt(pp, st, v.u, v.com_zp, v.z), v.prod);
  t.append(Role::prover, "evsc.open_f", pack(v.gamma_f));
  t.append(Role::prover, "evsc.open_fp", v.open_fp.to_bytes());
}

Verdict run_evsc(Session& s, const PublicParams& pp, const EvscStmt& st, const EvscWitness& w, Rng& rng) {
  auto from = s.transcript().size();
  prove_evsc(s, pp, st, w, rng);
  return check_from(
      s, from, st, [&](Cursor& c, const EvscStmt& x) { return read_evsc(c, pp, x); },
      [&](const EvscView& v) { return verify_evsc(pp, st, v); });
}

}  // namespace vddp::sigma
