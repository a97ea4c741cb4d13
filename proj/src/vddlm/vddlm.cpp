#include "vddp/vddlm/vddlm.hpp"

namespace vddp::vddlm {

using sigma::Cursor;
using sigma::Role;
using sigma::Session;
using sigma::Verdict;
using sigma::pack;

namespace {

constexpr std::size_t kSeedRandLen = 3;

Bytes stmt_bytes(const ConstraintSystem& cs, const SerStmt& st) {
  Writer w;
  w.raw(cs.digest);
  w.put(st.psi);
  w.put(st.phi);
  w.put(st.share_com);
  return w.take();
}

Bytes y_bytes(std::span<const Fr> y) {
  Writer w;
  w.u32(std::uint32_t(y.size()));
  for (auto& x : y) w.put(x);
  return w.take();
}

std::vector<Fr> read_y(std::span<const std::uint8_t> b, std::size_t d) {
  Reader r(b);
  if (r.u32() != d) throw DecodeError("ser: output share length");
  std::vector<Fr> y(d);
  for (auto& x : y) x = r.get<Fr>();
  r.expect_done();
  return y;
}

struct ProverColumns {
  ColumnPolys polys;
  G1 com_b, com_s;
};

ProverColumns columns_for(const ConstraintSystem& cs, const PublicParams& pp, const ServerState& state,
                          const ServerWork& w, Rng& rng) {
  ProverColumns pc;
  auto& P = pc.polys;
  for (Col c : {kW, kB, kC, kT, kU}) P[c] = mask_column(cs, w.witness.cols[c], rng);
  P[kS].F = {w.s_prime};
  P[kS].R.resize(kSeedRandLen);
  for (auto& r : P[kS].R) r = Fr::random(rng);
  unsigned log = sharing::vector_log_size(cs.layout.d);
  P[kX].F = sharing::vector_poly(w.x_claimed, log);
  P[kX].R = sharing::vector_poly(state.r_share, log);
  pc.com_b = commit::kzg_commit(P[kB].F, P[kB].R, pp);
  pc.com_s = commit::kzg_commit(P[kS].F, P[kS].R, pp);
  return pc;
}

// Recomputes everything downstream of the bits.
void reassign(const ConstraintSystem& cs, ServerWork& w) {
  w.witness = assign_witness(cs, w.s_prime, w.lprf, w.x_claimed);
}

}  // namespace

ServerState make_server_with_sigma(const PublicParams& pp, const Fr& sigma, Rng& rng) {
  ServerState st;
  st.sigma = sigma;
  st.rho = Fr::random(rng);
  st.psi = commit::pedersen_commit(st.sigma, st.rho, pp);
  return st;
}

ServerState make_server(const PublicParams& pp, Rng& rng) { return make_server_with_sigma(pp, Fr::random(rng), rng); }

ServerWork server_compute(const ConstraintSystem& cs, const ServerState& st, const Fr& phi, const BitHook& hook) {
  const auto& L = cs.layout;
  std::uint64_t demand = std::uint64_t(L.d) * L.n_lap;
  if (demand > kLprfBitBudget) throw BitBudgetExceeded();
  if (st.x_share.size() != L.d) throw std::invalid_argument("share length mismatch");
  ServerWork w;
  w.s_prime = st.sigma + phi;
  w.lprf = randomness::lprf_eval(w.s_prime, demand);
  if (hook) {
    hook(w.lprf.bits);
    if (w.lprf.bits.size() != demand) throw std::invalid_argument("bit hook changed the length");
  }
  w.x_claimed = st.x_share;
  reassign(cs, w);
  return w;
}

ServerWork server_compute(const ServerState& st, const Fr& phi, const LaplaceParams& lp, std::size_t d,
                          const BitHook& hook) {
  if (std::uint64_t(d) * lp.n_lap > kLprfBitBudget) throw BitBudgetExceeded();
  return server_compute(build_constraints(lp, d), st, phi, hook);
}

std::vector<std::int64_t> server_noise(const Fr& s_prime, const LaplaceParams& lp, std::size_t d) {
  if (std::uint64_t(d) * lp.n_lap > kLprfBitBudget) throw BitBudgetExceeded();
  auto bits = randomness::lprf_bits(s_prime, d * lp.n_lap);
  std::vector<std::int64_t> out(d);
  for (std::size_t j = 0; j < d; ++j)
    out[j] = randomness::c_lap_flat(std::span(bits).subspan(j * lp.n_lap, lp.n_lap), lp).noise;
  return out;
}

const char* cheat_name(SerCheat c) {
  switch (c) {
    case SerCheat::none: return "none";
    case SerCheat::lprf_bit_flip: return "lprf-bit-flip";
    case SerCheat::chain_break: return "chain-break";
    case SerCheat::sign_forgery: return "sign-forgery";
    case SerCheat::magnitude_forgery: return "magnitude-forgery";
    case SerCheat::noise_tamper: return "noise-tamper";
    case SerCheat::share_mismatch: return "share-mismatch";
    case SerCheat::noise_omit: return "noise-omit";
  }
  return "?";
}

SerCheat cheat_from_name(std::string_view name) {
  for (auto c : {SerCheat::none, SerCheat::lprf_bit_flip, SerCheat::chain_break, SerCheat::sign_forgery,
                 SerCheat::magnitude_forgery, SerCheat::noise_tamper, SerCheat::share_mismatch, SerCheat::noise_omit})
    if (name == cheat_name(c)) return c;
  throw std::invalid_argument("unknown server deviation: " + std::string(name));
}

void apply_cheat(const ConstraintSystem& cs, ServerWork& w, SerCheat cheat, Rng& rng) {
  const auto& L = cs.layout;
  const auto& lp = cs.params;
  auto& cols = w.witness.cols;
  auto& y = w.witness.y;
  std::size_t j = rng.uniform(L.d);
  std::size_t r0 = L.row(j, 0);
  const Fr one = Fr::one();
  switch (cheat) {
    case SerCheat::none: break;
    case SerCheat::lprf_bit_flip: {
      std::size_t k = rng.uniform(w.lprf.bits.size());
      w.lprf.bits[k] ^= 1;  // the square-root witness is kept
      reassign(cs, w);
      break;
    }
    case SerCheat::chain_break: {
      std::vector<std::size_t> rows;
      for (unsigned s = 0; s < lp.n_lap; ++s) {
        std::size_t r = L.row(j, s);
        if (!(cs.pub_values[kSelInit][r] + cs.pub_values[kSelOr][r] + cs.pub_values[kSelAnd][r]).is_zero())
          rows.push_back(r);
      }
      std::size_t r = rows[rng.uniform(rows.size())];
      cols[kC][r] = one - cols[kC][r];
      break;
    }
    case SerCheat::sign_forgery: {
      Fr old = cols[kU][r0];
      cols[kU][r0] = -old;
      // Output follows the forged sign (zero when b_z = 1).
      Fr bz = cols[kC][L.row(j, lp.zero_offset())];
      y[j] += (one - bz) * (cols[kU][r0] - old);
      break;
    }
    case SerCheat::magnitude_forgery: {
      Fr old = cols[kU][r0];
      cols[kT][r0] += one;
      Fr b = cols[kB][r0];
      cols[kU][r0] = (b + b - one) * (one + cols[kT][r0]);
      Fr bz = cols[kC][L.row(j, lp.zero_offset())];
      y[j] += (one - bz) * (cols[kU][r0] - old);
      break;
    }
    case SerCheat::noise_tamper: y[j] += one; break;
    case SerCheat::share_mismatch: {
      w.x_claimed[j] += one;
      cols[kX][r0] = w.x_claimed[j];
      y[j] += one;
      break;
    }
    case SerCheat::noise_omit:
      for (std::size_t k = 0; k < L.d; ++k) y[k] = w.x_claimed[k];
      break;
  }
}

G1 fused_psi(const PublicParams& pp, const SerStmt& st) { return st.psi + commit::g_mul(st.phi, pp); }

CircuitStmt lprf_stmt() {
  CircuitStmt c;
  c.part = Part::lprf;
  return c;
}

CircuitStmt lap_stmt(const SerStmt& st, const G1& zeta, std::span<const Fr> y) {
  CircuitStmt c;
  c.part = Part::lap;
  c.given[kB] = zeta;
  c.given[kX] = st.share_com;
  c.y.assign(y.begin(), y.end());
  return c;
}

sigma::EqStmt seed_eq_stmt(const PublicParams& pp, const SerStmt& st, const G1& com_s) {
  return {fused_psi(pp, st), com_s, kSeedRandLen};
}

void prove_ser(Session& s, const ConstraintSystem& cs, const PublicParams& pp, const SerStmt& st,
               const ServerState& state, const ServerWork& w, Rng& rng) {
  s.statement("ser.stmt", stmt_bytes(cs, st));
  auto pc = columns_for(cs, pp, state, w, rng);
  prove_circuit(s, cs, pp, lprf_stmt(), pc.polys, rng);
  sigma::EqWitness ew{w.s_prime, state.rho, pc.polys[kS].R};
  sigma::prove_eq(s, pp, seed_eq_stmt(pp, st, pc.com_s), ew, rng);
  s.send("ser.y", y_bytes(w.witness.y));
  prove_circuit(s, cs, pp, lap_stmt(st, pc.com_b, w.witness.y), pc.polys, rng);
}

SerView read_ser(Cursor& c, const ConstraintSystem& cs, const PublicParams& pp, const SerStmt& st) {
  c.statement("ser.stmt", stmt_bytes(cs, st));
  SerView v;
  v.lprf = read_circuit(c, cs, lprf_stmt());
  v.eq = sigma::read_eq(c, seed_eq_stmt(pp, st, v.lprf.coms[kS]));
  v.y = read_y(c.prover("ser.y"), cs.layout.d);
  v.lap = read_circuit(c, cs, lap_stmt(st, v.lprf.coms[kB], v.y));
  return v;
}

Verdict verify_ser(const ConstraintSystem& cs, const PublicParams& pp, const SerStmt& st, const SerView& v) {
  if (auto r = verify_circuit(cs, pp, lprf_stmt(), v.lprf); !r) return Verdict::reject("LPRF proof: " + r.reason);
  if (!sigma::verify_eq(pp, seed_eq_stmt(pp, st, v.lprf.coms[kS]), v.eq))
    return Verdict::reject("seed binding proof failed");
  if (auto r = verify_circuit(cs, pp, lap_stmt(st, v.lprf.coms[kB], v.y), v.lap); !r)
    return Verdict::reject("sampling proof: " + r.reason);
  return Verdict::accept();
}

SerView simulate_ser(const ConstraintSystem& cs, const PublicParams& pp, const SerStmt& st, std::span<const Fr> y,
                     Rng& rng) {
  SerView v;
  v.lprf = simulate_circuit(cs, pp, lprf_stmt(), rng);
  v.eq = sigma::simulate_eq(pp, seed_eq_stmt(pp, st, v.lprf.coms[kS]), rng);
  v.y.assign(y.begin(), y.end());
  v.lap = simulate_circuit(cs, pp, lap_stmt(st, v.lprf.coms[kB], v.y), rng);
  return v;
}

void write_ser(sigma::Transcript& t, const ConstraintSystem& cs, const PublicParams& pp, const SerStmt& st,
               const SerView& v) {
  t.append(Role::statement, "ser.stmt", stmt_bytes(cs, st));
  write_circuit(t, cs, lprf_stmt(), v.lprf);
  sigma::write_eq(t, seed_eq_stmt(pp, st, v.lprf.coms[kS]), v.eq);
  t.append(Role::prover, "ser.y", y_bytes(v.y));
  write_circuit(t, cs, lap_stmt(st, v.lprf.coms[kB], v.y), v.lap);
}

SerOutcome run_pi_ser(Session& s, const ConstraintSystem& cs, const PublicParams& pp, const SerStmt& st,
                      const ServerState& state, const ServerWork& w, Rng& rng) {
  auto from = s.transcript().size();
  prove_ser(s, cs, pp, st, state, w, rng);
  SerOutcome out;
  try {
    Cursor c(s.transcript(), from);
    auto v = read_ser(c, cs, pp, st);
    out.y_share = v.y;
    out.verdict = verify_ser(cs, pp, st, v);
  } catch (const DecodeError& e) {
    out.verdict = Verdict::reject(std::string("malformed message: ") + e.what());
  }
  return out;
}

std::int64_t decode_signed(const Fr& v) {
  bool neg = v.is_lexicographically_largest();
  auto l = (neg ? -v : v).to_limbs();
  for (std::size_t i = 1; i < l.size(); ++i)
    if (l[i]) throw std::overflow_error("value does not decode to a small integer");
  if (l[0] >> 62) throw std::overflow_error("value does not decode to a small integer");
  auto m = std::int64_t(l[0]);
  return neg ? -m : m;
}

Aggregate aggregate_outputs(const std::vector<bool>& accepted, const std::vector<std::vector<Fr>>& y_shares) {
  Aggregate a;
  if (accepted.empty() || accepted.size() != y_shares.size()) return a;
  for (bool b : accepted)
    if (!b) return a;
  std::size_t d = y_shares[0].size();
  a.y.assign(d, Fr::zero());
  for (auto& ys : y_shares) {
    if (ys.size() != d) throw std::invalid_argument("dimension mismatch");
    for (std::size_t j = 0; j < d; ++j) a.y[j] += ys[j];
  }
  for (auto& v : a.y) a.decoded.push_back(decode_signed(v));
  a.aborted = false;
  return a;
}

}  // namespace vddp::vddlm
