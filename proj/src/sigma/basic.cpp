#include "vddp/sigma/protocols.hpp"

namespace vddp::sigma {

using commit::h_mul;
using commit::pedersen_commit;

namespace {

Bytes scalars(std::span<const Fr> xs) {
  Writer w;
  for (auto& x : xs) w.put(x);
  return w.take();
}

std::vector<Fr> unpack_scalars(const Bytes& b, std::size_t n) {
  Reader r(b);
  std::vector<Fr> out(n);
  for (auto& x : out) x = r.get<Fr>();
  r.expect_done();
  return out;
}

Bytes c_bytes(const Fr& c) {
  auto b = c.to_bytes();
  return Bytes(b.begin(), b.end());
}

Bytes eq_stmt_bytes(const EqStmt& st) {
  Writer w;
  w.put(st.com_ped);
  w.put(st.com_kzg);
  w.u64(st.r_len);
  return w.take();
}

}  // namespace

// ---------------------------------------------------------------- opening

bool verify_opening(const PublicParams& pp, const OpeningStmt& st, const OpeningView& v) {
  return pedersen_commit(v.s1, v.s2, pp) == v.a + st.com * v.c;
}

void prove_opening(Session& s, const PublicParams& pp, const OpeningStmt& st, const OpeningWitness& w, Rng& rng) {
  s.statement("open.stmt", pack(st.com));
  Fr k1 = Fr::random(rng), k2 = Fr::random(rng);
  s.send("open.a", pack(pedersen_commit(k1, k2, pp)));
  Fr c = s.challenge("open.c");
  s.send("open.s", pack(k1 + c * w.x, k2 + c * w.r));
}

OpeningView read_opening(Cursor& c, const OpeningStmt& st) {
  c.statement("open.stmt", pack(st.com));
  OpeningView v;
  unpack(c.prover("open.a"), v.a);
  v.c = c.challenge("open.c");
  unpack(c.prover("open.s"), v.s1, v.s2);
  return v;
}

OpeningView simulate_opening(const PublicParams& pp, const OpeningStmt& st, Rng& rng) {
  OpeningView v;
  v.c = Fr::random(rng);
  v.s1 = Fr::random(rng);
  v.s2 = Fr::random(rng);
  v.a = pedersen_commit(v.s1, v.s2, pp) - st.com * v.c;
  return v;
}

void write_opening(Transcript& t, const OpeningStmt& st, const OpeningView& v) {
  t.append(Role::statement, "open.stmt", pack(st.com));
  t.append(Role::prover, "open.a", pack(v.a));
  t.append(Role::verifier, "open.c", c_bytes(v.c));
  t.append(Role::prover, "open.s", pack(v.s1, v.s2));
}

Verdict run_opening(Session& s, const PublicParams& pp, const OpeningStmt& st, const OpeningWitness& w, Rng& rng) {
  auto from = s.transcript().size();
  prove_opening(s, pp, st, w, rng);
  return check_from(s, from, st, read_opening, [&](const OpeningView& v) { return verify_opening(pp, st, v); });
}

OpeningWitness extract_opening(const OpeningView& v1, const OpeningView& v2) {
  Fr dc = (v1.c - v2.c).inv();
  return {(v1.s1 - v2.s1) * dc, (v1.s2 - v2.s2) * dc};
}

// ---------------------------------------------------------------- product

namespace {
Bytes prod_stmt_bytes(const ProdStmt& st) { return pack(st.com_y, st.com_z, st.com_x); }
}  // namespace

bool verify_prod(const PublicParams& pp, const ProdStmt& st, const ProdView& v) {
  return pedersen_commit(v.s_x, v.s_rx, pp) == v.a_x + st.com_x * v.c &&
         pedersen_commit(v.s_z, v.s_rz, pp) == v.a_z + st.com_z * v.c &&
         st.com_z * v.s_x + h_mul(v.s_r, pp) == v.a_y + st.com_y * v.c;
}

void prove_prod(Session& s, const PublicParams& pp, const ProdStmt& st, const ProdWitness& w, Rng& rng) {
  s.statement("prod.stmt", prod_stmt_bytes(st));
  Fr kx = Fr::random(rng), krx = Fr::random(rng), kz = Fr::random(rng), krz = Fr::random(rng),
     kr = Fr::random(rng);
  s.send("prod.a", pack(pedersen_commit(kx, krx, pp), pedersen_commit(kz, krz, pp), st.com_z * kx + h_mul(kr, pp)));
  Fr c = s.challenge("prod.c");
  Fr r_prime = w.r_y - w.x * w.r_z;
  s.send("prod.s", pack(kx + c * w.x, krx + c * w.r_x, kz + c * w.z, krz + c * w.r_z, kr + c * r_prime));
}

ProdView read_prod(Cursor& c, const ProdStmt& st) {
  c.statement("prod.stmt", prod_stmt_bytes(st));
  ProdView v;
  unpack(c.prover("prod.a"), v.a_x, v.a_z, v.a_y);
  v.c = c.challenge("prod.c");
  unpack(c.prover("prod.s"), v.s_x, v.s_rx, v.s_z, v.s_rz, v.s_r);
  return v;
}

ProdView simulate_prod(const PublicParams& pp, const ProdStmt& st, Rng& rng) {
  ProdView v;
  v.c = Fr::random(rng);
  v.s_x = Fr::random(rng);
  v.s_rx = Fr::random(rng);
  v.s_z = Fr::random(rng);
  v.s_rz = Fr::random(rng);
  v.s_r = Fr::random(rng);
  v.a_x = pedersen_commit(v.s_x, v.s_rx, pp) - st.com_x * v.c;
  v.a_z = pedersen_commit(v.s_z, v.s_rz, pp) - st.com_z * v.c;
  v.a_y = st.com_z * v.s_x + h_mul(v.s_r, pp) - st.com_y * v.c;
  return v;
}

void write_prod(Transcript& t, const ProdStmt& st, const ProdView& v) {
  t.append(Role::statement, "prod.stmt", prod_stmt_bytes(st));
  t.append(Role::prover, "prod.a", pack(v.a_x, v.a_z, v.a_y));
  t.append(Role::verifier, "prod.c", c_bytes(v.c));
  t.append(Role::prover, "prod.s", pack(v.s_x, v.s_rx, v.s_z, v.s_rz, v.s_r));
}

Verdict run_prod(Session& s, const PublicParams& pp, const ProdStmt& st, const ProdWitness& w, Rng& rng) {
  auto from = s.transcript().size();
  prove_prod(s, pp, st, w, rng);
  return check_from(s, from, st, read_prod, [&](const ProdView& v) { return verify_prod(pp, st, v); });
}

ProdWitness extract_prod(const ProdView& v1, const ProdView& v2) {
  Fr dc = (v1.c - v2.c).inv();
  ProdWitness w;
  w.x = (v1.s_x - v2.s_x) * dc;
  w.r_x = (v1.s_rx - v2.s_rx) * dc;
  w.z = (v1.s_z - v2.s_z) * dc;
  w.r_z = (v1.s_rz - v2.s_rz) * dc;
  Fr r_prime = (v1.s_r - v2.s_r) * dc;
  w.y = w.z * w.x;
  w.r_y = r_prime + w.x * w.r_z;
  return w;
}

// --------------------------------------------------------------------- or

bool verify_or(const PublicParams& pp, const OrStmt& st, const OrView& v) {
  G1 p0 = st.com, p1 = st.com - pp.g;
  return h_mul(v.s0, pp) == v.a0 + p0 * v.c0 && h_mul(v.s1, pp) == v.a1 + p1 * (v.c - v.c0);
}

void prove_or(Session& s, const PublicParams& pp, const OrStmt& st, const OrWitness& w, Rng& rng) {
  s.statement("or.stmt", pack(st.com));
  G1 p[2] = {st.com, st.com - pp.g};
  int real = w.b.is_zero() ? 0 : 1, fake = 1 - real;
  Fr cs[2], ss[2];
  G1 as[2];
  cs[fake] = Fr::random(rng);
  ss[fake] = Fr::random(rng);
  as[fake] = h_mul(ss[fake], pp) - p[fake] * cs[fake];
  Fr k = Fr::random(rng);
  as[real] = h_mul(k, pp);
  s.send("or.a", pack(as[0], as[1]));
  Fr c = s.challenge("or.c");
  cs[real] = c - cs[fake];
  ss[real] = k + cs[real] * w.r;
  s.send("or.s", pack(cs[0], ss[0], ss[1]));
}

OrView read_or(Cursor& c, const OrStmt& st) {
  c.statement("or.stmt", pack(st.com));
  OrView v;
  unpack(c.prover("or.a"), v.a0, v.a1);
  v.c = c.challenge("or.c");
  unpack(c.prover("or.s"), v.c0, v.s0, v.s1);
  return v;
}

OrView simulate_or(const PublicParams& pp, const OrStmt& st, Rng& rng) {
  OrView v;
  v.c = Fr::random(rng);
  v.c0 = Fr::random(rng);
  v.s0 = Fr::random(rng);
  v.s1 = Fr::random(rng);
  v.a0 = h_mul(v.s0, pp) - st.com * v.c0;
  v.a1 = h_mul(v.s1, pp) - (st.com - pp.g) * (v.c - v.c0);
  return v;
}

void write_or(Transcript& t, const OrStmt& st, const OrView& v) {
  t.append(Role::statement, "or.stmt", pack(st.com));
  t.append(Role::prover, "or.a", pack(v.a0, v.a1));
  t.append(Role::verifier, "or.c", c_bytes(v.c));
  t.append(Role::prover, "or.s", pack(v.c0, v.s0, v.s1));
}

Verdict run_or(Session& s, const PublicParams& pp, const OrStmt& st, const OrWitness& w, Rng& rng) {
  auto from = s.transcript().size();
  prove_or(s, pp, st, w, rng);
  return check_from(s, from, st, read_or, [&](const OrView& v) { return verify_or(pp, st, v); });
}

// --------------------------------------------------------------- equality

bool verify_eq(const PublicParams& pp, const EqStmt& st, const EqView& v) {
  if (v.s_R.size() != st.r_len) return false;
  std::vector<Fr> f{v.s_v};
  return pedersen_commit(v.s_v, v.s_r, pp) == v.a1 + st.com_ped * v.c &&
         commit::kzg_commit(f, v.s_R, pp) == v.a2 + st.com_kzg * v.c;
}

void prove_eq(Session& s, const PublicParams& pp, const EqStmt& st, const EqWitness& w, Rng& rng) {
  s.statement("eq.stmt", eq_stmt_bytes(st));
  Fr kv = Fr::random(rng), kr = Fr::random(rng);
  std::vector<Fr> kR(st.r_len);
  for (auto& k : kR) k = Fr::random(rng);
  std::vector<Fr> f{kv};
  s.send("eq.a", pack(pedersen_commit(kv, kr, pp), commit::kzg_commit(f, kR, pp)));
  Fr c = s.challenge("eq.c");
  std::vector<Fr> resp{kv + c * w.v, kr + c * w.r};
  for (std::size_t j = 0; j < st.r_len; ++j) resp.push_back(kR[j] + c * (j < w.R.size() ? w.R[j] : Fr::zero()));
  s.send("eq.s", scalars(resp));
}

EqView read_eq(Cursor& c, const EqStmt& st) {
  c.statement("eq.stmt", eq_stmt_bytes(st));
  EqView v;
  unpack(c.prover("eq.a"), v.a1, v.a2);
  v.c = c.challenge("eq.c");
  auto resp = unpack_scalars(c.prover("eq.s"), st.r_len + 2);
  v.s_v = resp[0];
  v.s_r = resp[1];
  v.s_R.assign(resp.begin() + 2, resp.end());
  return v;
}

EqView simulate_eq(const PublicParams& pp, const EqStmt& st, Rng& rng) {
  EqView v;
  v.c = Fr::random(rng);
  v.s_v = Fr::random(rng);
  v.s_r = Fr::random(rng);
  v.s_R.resize(st.r_len);
  for (auto& x : v.s_R) x = Fr::random(rng);
  std::vector<Fr> f{v.s_v};
  v.a1 = pedersen_commit(v.s_v, v.s_r, pp) - st.com_ped * v.c;
  v.a2 = commit::kzg_commit(f, v.s_R, pp) - st.com_kzg * v.c;
  return v;
}

void write_eq(Transcript& t, const EqStmt& st, const EqView& v) {
  t.append(Role::statement, "eq.stmt", eq_stmt_bytes(st));
  t.append(Role::prover, "eq.a", pack(v.a1, v.a2));
  t.append(Role::verifier, "eq.c", c_bytes(v.c));
  std::vector<Fr> resp{v.s_v, v.s_r};
  resp.insert(resp.end(), v.s_R.begin(), v.s_R.end());
  t.append(Role::prover, "eq.s", scalars(resp));
}

Verdict run_eq(Session& s, const PublicParams& pp, const EqStmt& st, const EqWitness& w, Rng& rng) {
  auto from = s.transcript().size();
  prove_eq(s, pp, st, w, rng);
  return check_from(s, from, st, read_eq, [&](const EqView& v) { return verify_eq(pp, st, v); });
}

// ------------------------------------------------------------------- dlog

bool verify_dlog(const PublicParams& pp, const DlogStmt& st, const DlogView& v) {
  return h_mul(v.s, pp) == v.a + st.P * v.c;
}

void prove_dlog(Session& s, const PublicParams& pp, const DlogStmt& st, const Fr& r, Rng& rng) {
  s.statement("dlog.stmt", pack(st.P));
  Fr k = Fr::random(rng);
  s.send("dlog.a", pack(h_mul(k, pp)));
  Fr c = s.challenge("dlog.c");
  s.send("dlog.s", pack(k + c * r));
}

DlogView read_dlog(Cursor& c, const DlogStmt& st) {
  c.statement("dlog.stmt", pack(st.P));
  DlogView v;
  unpack(c.prover("dlog.a"), v.a);
  v.c = c.challenge("dlog.c");
  unpack(c.prover("dlog.s"), v.s);
  return v;
}

DlogView simulate_dlog(const PublicParams& pp, const DlogStmt& st, Rng& rng) {
  DlogView v;
  v.c = Fr::random(rng);
  v.s = Fr::random(rng);
  v.a = h_mul(v.s, pp) - st.P * v.c;
  return v;
}

void write_dlog(Transcript& t, const DlogStmt& st, const DlogView& v) {
  t.append(Role::statement, "dlog.stmt", pack(st.P));
  t.append(Role::prover, "dlog.a", pack(v.a));
  t.append(Role::verifier, "dlog.c", c_bytes(v.c));
  t.append(Role::prover, "dlog.s", pack(v.s));
}

Verdict run_dlog(Session& s, const PublicParams& pp, const DlogStmt& st, const Fr& r, Rng& rng) {
  auto from = s.transcript().size();
  prove_dlog(s, pp, st, r, rng);
  return check_from(s, from, st, read_dlog, [&](const DlogView& v) { return verify_dlog(pp, st, v); });
}

}  // namespace vddp::sigma
