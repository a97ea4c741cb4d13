#include "vddp/i2dp/client_proof.hpp"

#include "vddp/algebra/poly.hpp"

namespace vddp::i2dp {

using commit::pedersen_commit;
using sigma::Cursor;
using sigma::Role;
using sigma::Session;

namespace {

Bytes stmt_bytes(const BitVecStmt& st) {
  Writer w;
  w.put(st.com);
  w.u32(std::uint32_t(st.d));
  return w.take();
}

template <class T>
Bytes list_bytes(const std::vector<T>& xs) {
  Writer w;
  for (auto& x : xs) w.put(x);
  return w.take();
}

template <class T>
std::vector<T> read_list(std::span<const std::uint8_t> b, std::size_t n) {
  Reader r(b);
  std::vector<T> out(n);
  for (auto& x : out) x = r.get<T>();
  r.expect_done();
  return out;
}

Bytes fr_bytes(const Fr& x) {
  auto b = x.to_bytes();
  return Bytes(b.begin(), b.end());
}

G1 vector_term(const LagrangeKey& lk, std::span<const Fr> x, std::span<const Fr> r) {
  std::vector<G1> pts;
  std::vector<Fr> sc;
  for (std::size_t k = 0; k < x.size(); ++k) {
    pts.push_back(lk.G[k]);
    sc.push_back(x[k]);
    pts.push_back(lk.H[k]);
    sc.push_back(r[k]);
  }
  return algebra::msm(pts, sc);
}

void check_dims(const LagrangeKey& lk, const BitVecStmt& st) {
  if (st.d == 0 || st.d > lk.G.size()) throw std::invalid_argument("bit-vector proof: dimension exceeds key");
}

}  // namespace

LagrangeKey lagrange_key(const PublicParams& pp, unsigned log_size) {
  auto dom = algebra::domain_generate<Fr>(log_size);
  if (pp.max_degree + 1 < dom.size) throw commit::DegreeOverflow();
  LagrangeKey lk;
  lk.log_size = log_size;
  std::vector<G1> gp, hp;
  for (std::size_t i = 0; i < dom.size; ++i) {
    gp.emplace_back(pp.g_powers[i]);
    hp.emplace_back(pp.h_powers[i]);
  }
  for (std::size_t k = 0; k < dom.size; ++k) {
    std::vector<Fr> e(dom.size, Fr::zero());
    e[k] = Fr::one();
    auto L = algebra::ntt(std::move(e), dom);
    lk.G.push_back(algebra::msm(gp, L));
    lk.H.push_back(algebra::msm(hp, L));
  }
  return lk;
}

bool verify_bitvec(const PublicParams& pp, const LagrangeKey& lk, const BitVecStmt& st, const BitVecView& v) {
  check_dims(lk, st);
  const std::size_t d = st.d;
  if (v.coords.size() != d || v.bits.size() != d || v.a.size() != d || v.z_x.size() != d || v.z_s.size() != d ||
      v.z_r.size() != d)
    return false;
  for (std::size_t k = 0; k < d; ++k)
    if (!sigma::verify_or(pp, {v.coords[k]}, v.bits[k])) return false;
  for (std::size_t k = 0; k < d; ++k)
    if (pedersen_commit(v.z_x[k], v.z_s[k], pp) != v.a[k] + v.coords[k] * v.c) return false;
  return vector_term(lk, v.z_x, v.z_r) == v.A + st.com * v.c;
}

void prove_bitvec(Session& s, const PublicParams& pp, const LagrangeKey& lk, const BitVecStmt& st,
                  const BitVecWitness& w, Rng& rng) {
  check_dims(lk, st);
  const std::size_t d = st.d;
  if (w.x.size() != d || w.r.size() != d) throw std::invalid_argument("bit-vector witness length");
  s.statement("bv.stmt", stmt_bytes(st));
  std::vector<Fr> sk(d);
  std::vector<G1> coords(d);
  for (std::size_t k = 0; k < d; ++k) {
    sk[k] = Fr::random(rng);
    coords[k] = pedersen_commit(w.x[k], sk[k], pp);
  }
  s.send("bv.coords", list_bytes(coords));
  for (std::size_t k = 0; k < d; ++k) sigma::prove_or(s, pp, {coords[k]}, {w.x[k], sk[k]}, rng);
  std::vector<Fr> ax(d), as(d), ar(d);
  std::vector<G1> a(d);
  for (std::size_t k = 0; k < d; ++k) {
    ax[k] = Fr::random(rng), as[k] = Fr::random(rng), ar[k] = Fr::random(rng);
    a[k] = pedersen_commit(ax[k], as[k], pp);
  }
  G1 A = vector_term(lk, ax, ar);
  Bytes msg = list_bytes(a);
  auto Ab = A.to_bytes();
  msg.insert(msg.end(), Ab.begin(), Ab.end());
  s.send("bv.a", std::move(msg));
  Fr c = s.challenge("bv.c");
  std::vector<Fr> zx(d), zs(d), zr(d);
  for (std::size_t k = 0; k < d; ++k) {
    zx[k] = ax[k] + c * w.x[k];
    zs[k] = as[k] + c * sk[k];
    zr[k] = ar[k] + c * w.r[k];
  }
  Bytes z = list_bytes(zx);
  for (auto* v : {&zs, &zr}) {
    auto b = list_bytes(*v);
    z.insert(z.end(), b.begin(), b.end());
  }
  s.send("bv.z", std::move(z));
}

BitVecView read_bitvec(Cursor& c, const BitVecStmt& st) {
  c.statement("bv.stmt", stmt_bytes(st));
  const std::size_t d = st.d;
  BitVecView v;
  v.coords = read_list<G1>(c.prover("bv.coords"), d);
  for (std::size_t k = 0; k < d; ++k) v.bits.push_back(sigma::read_or(c, {v.coords[k]}));
  {
    const auto& b = c.prover("bv.a");
    if (b.size() != (d + 1) * G1::kBytes) throw DecodeError("bit-vector: nonce message length");
    v.a = read_list<G1>(std::span(b).first(d * G1::kBytes), d);
    v.A = read_list<G1>(std::span(b).subspan(d * G1::kBytes), 1)[0];
  }
  v.c = c.challenge("bv.c");
  {
    const auto& b = c.prover("bv.z");
    auto all = read_list<Fr>(b, 3 * d);
    v.z_x.assign(all.begin(), all.begin() + long(d));
    v.z_s.assign(all.begin() + long(d), all.begin() + long(2 * d));
    v.z_r.assign(all.begin() + long(2 * d), all.end());
  }
  return v;
}

BitVecView simulate_bitvec(const PublicParams& pp, const LagrangeKey& lk, const BitVecStmt& st, Rng& rng) {
  check_dims(lk, st);
  const std::size_t d = st.d;
  BitVecView v;
  v.c = Fr::random(rng);
  for (std::size_t k = 0; k < d; ++k) {
    v.coords.push_back(pedersen_commit(Fr::random(rng), Fr::random(rng), pp));
    v.bits.push_back(sigma::simulate_or(pp, {v.coords[k]}, rng));
    v.z_x.push_back(Fr::random(rng));
    v.z_s.push_back(Fr::random(rng));
    v.z_r.push_back(Fr::random(rng));
    v.a.push_back(pedersen_commit(v.z_x[k], v.z_s[k], pp) - v.coords[k] * v.c);
  }
  v.A = vector_term(lk, v.z_x, v.z_r) - st.com * v.c;
  return v;
}

void write_bitvec(sigma::Transcript& t, const BitVecStmt& st, const BitVecView& v) {
  t.append(Role::statement, "bv.stmt", stmt_bytes(st));
  t.append(Role::prover, "bv.coords", list_bytes(v.coords));
  for (std::size_t k = 0; k < v.bits.size(); ++k) sigma::write_or(t, {v.coords[k]}, v.bits[k]);
  Bytes msg = list_bytes(v.a);
  auto Ab = v.A.to_bytes();
  msg.insert(msg.end(), Ab.begin(), Ab.end());
  t.append(Role::prover, "bv.a", std::move(msg));
  t.append(Role::verifier, "bv.c", fr_bytes(v.c));
  Bytes z = list_bytes(v.z_x);
  for (auto* x : {&v.z_s, &v.z_r}) {
    auto b = list_bytes(*x);
    z.insert(z.end(), b.begin(), b.end());
  }
  t.append(Role::prover, "bv.z", std::move(z));
}

sigma::Verdict run_bitvec(Session& s, const PublicParams& pp, const LagrangeKey& lk, const BitVecStmt& st,
                          const BitVecWitness& w, Rng& rng) {
  auto from = s.transcript().size();
  prove_bitvec(s, pp, lk, st, w, rng);
  return sigma::check_from(
      s, from, st, [&](Cursor& c, const BitVecStmt& x) { return read_bitvec(c, x); },
      [&](const BitVecView& v) { return verify_bitvec(pp, lk, st, v); });
}

}  // namespace vddp::i2dp
