#include "vddp/vddlm/circuit.hpp"

#include <bit>

namespace vddp::vddlm {

using commit::kzg_commit;
using commit::kzg_open;
using commit::KzgClaim;
using commit::KzgOpening;
using sigma::Cursor;
using sigma::Role;
using sigma::Session;
using sigma::Verdict;
using sigma::pack;
using sigma::unpack;

namespace {

unsigned ceil_log2(std::size_t n) { return n <= 1 ? 0 : unsigned(std::bit_width(n - 1)); }

constexpr std::size_t kMaskLen = 3;  // blinding coefficients per masked column
constexpr std::size_t kQuotRandLen = 2;

std::vector<Fr> random_vec(Rng& rng, std::size_t n) {
  std::vector<Fr> v(n);
  for (auto& x : v) x = Fr::random(rng);
  return v;
}

Bytes fr_bytes(const Fr& x) {
  auto b = x.to_bytes();
  return Bytes(b.begin(), b.end());
}

Bytes fr_list(std::span<const Fr> xs) {
  Writer w;
  w.u32(std::uint32_t(xs.size()));
  for (auto& x : xs) w.put(x);
  return w.take();
}

std::vector<Fr> read_fr_list(std::span<const std::uint8_t> b, std::size_t expect) {
  Reader r(b);
  if (r.u32() != expect) throw DecodeError("circuit: wrong element count");
  std::vector<Fr> out(expect);
  for (auto& x : out) x = r.get<Fr>();
  r.expect_done();
  return out;
}

std::vector<Col> fresh_columns(const CircuitStmt& st) {
  std::vector<Col> out;
  for (Col c : part_columns(st.part))
    if (!st.given[c]) out.push_back(c);
  return out;
}

std::vector<Col> opened_at_u(Part p) {
  std::vector<Col> out;
  for (Col c : part_columns(p))
    if (c != part_linearized(p)) out.push_back(c);
  return out;
}

Bytes stmt_bytes(const ConstraintSystem& cs, const CircuitStmt& st) {
  Writer w;
  w.raw(cs.digest);
  w.u8(std::uint8_t(st.part));
  for (unsigned c = 0; c < kNumCols; ++c) {
    w.u8(st.given[c] ? 1 : 0);
    if (st.given[c]) w.put(*st.given[c]);
  }
  w.raw(fr_list(st.y));
  return w.take();
}

// Σ η^k c_k over the constraints of one part.
Fr combine(const ConstraintSystem& cs, Part part, const Env& env, const Fr& eta) {
  Fr acc = Fr::zero(), pw = Fr::one();
  for (auto& c : cs.constraints) {
    if (c.part != part) continue;
    acc += pw * c.eval(env, cs.qnr);
    pw *= eta;
  }
  return acc;
}

struct TableEnv final : Env {
  const std::array<const std::vector<Fr>*, kNumCols>& cols;
  const std::array<const std::vector<Fr>*, kNumPub>& pubs;
  std::size_t idx, step, size;
  TableEnv(const std::array<const std::vector<Fr>*, kNumCols>& c, const std::array<const std::vector<Fr>*, kNumPub>& p,
           std::size_t i, std::size_t st, std::size_t n)
      : cols(c), pubs(p), idx(i), step(st), size(n) {}
  Fr col(Col c, unsigned rot) const override {
    auto* v = cols[c];
    return v ? (*v)[(idx + rot * step) % size] : Fr::zero();
  }
  Fr pub(Pub p) const override {
    auto* v = pubs[p];
    return v ? (*v)[idx] : Fr::zero();
  }
};

// Point evaluations as seen by the verifier.
struct PointEnv final : Env {
  std::array<Fr, kNumCols> at_u{}, at_w{};
  std::array<Fr, kNumPub> pubs{};
  Fr col(Col c, unsigned rot) const override { return rot ? at_w[c] : at_u[c]; }
  Fr pub(Pub p) const override { return pubs[p]; }
};

std::vector<Fr> y_coeffs(const ConstraintSystem& cs, std::span<const Fr> y) {
  std::vector<Fr> v(cs.layout.D, Fr::zero());
  if (y.size() > cs.layout.d) throw std::invalid_argument("output share too long");
  std::copy(y.begin(), y.end(), v.begin());
  return algebra::ntt(std::move(v), algebra::domain_generate<Fr>(cs.layout.log_D));
}

// Public column values at u (O(N) each).
PointEnv public_at(const ConstraintSystem& cs, const CircuitStmt& st, const Fr& u) {
  PointEnv env;
  for (unsigned p = 0; p < kNumPub; ++p)
    if (p != kY) env.pubs[p] = algebra::poly_eval<Fr>(cs.pub_coeffs[p], u);
  env.pubs[kY] = st.part == Part::lap ? algebra::poly_eval<Fr>(y_coeffs(cs, st.y), u) : Fr::zero();
  return env;
}

struct LinForm {
  Fr f0, kappa;  // combination = f0 + κ·(linearized column at u)
};

LinForm linear_form(const ConstraintSystem& cs, Part part, PointEnv env, const Fr& eta) {
  Col lin = part_linearized(part);
  env.at_u[lin] = Fr::zero();
  Fr f0 = combine(cs, part, env, eta);
  env.at_u[lin] = Fr::one();
  return {f0, combine(cs, part, env, eta) - f0};
}

// The two batched opening claims (at u and at ω·u).
std::vector<KzgClaim> build_claims(const ConstraintSystem& cs, const CircuitStmt& st, const CircuitView& v) {
  Part part = st.part;
  auto at_u = opened_at_u(part);
  auto rot = part_rotated(part);
  PointEnv env = public_at(cs, st, v.u);
  for (std::size_t i = 0; i < at_u.size(); ++i) env.at_u[at_u[i]] = v.eval_u[i];
  for (std::size_t i = 0; i < rot.size(); ++i) env.at_w[rot[i]] = v.eval_w[i];
  auto lf = linear_form(cs, part, env, v.eta);
  Fr zu = cs.domain.vanishing_at(v.u);
  // Z(u)·Q − κ·Lin opens to f0 at u.
  G1 com_lin = v.com_q * zu - v.coms[part_linearized(part)] * lf.kappa;

  G1 cu = com_lin;
  Fr yu = lf.f0, ru = v.rho_lin, pw = v.nu;
  for (std::size_t i = 0; i < at_u.size(); ++i) {
    cu += v.coms[at_u[i]] * pw;
    yu += v.eval_u[i] * pw;
    ru += v.rho_u[i] * pw;
    pw *= v.nu;
  }
  G1 cw = G1::identity();
  Fr yw = Fr::zero(), rw = Fr::zero();
  pw = Fr::one();
  for (std::size_t i = 0; i < rot.size(); ++i) {
    cw += v.coms[rot[i]] * pw;
    yw += v.eval_w[i] * pw;
    rw += v.rho_w[i] * pw;
    pw *= v.nu;
  }
  Fr w = v.u * cs.domain.omega;
  return {{cu, v.u, yu, KzgOpening{ru, v.gamma_u}}, {cw, w, yw, KzgOpening{rw, v.gamma_w}}};
}

std::vector<Fr> lin_comb(const std::vector<std::pair<Fr, const std::vector<Fr>*>>& terms) {
  std::size_t n = 0;
  for (auto& [c, p] : terms) n = std::max(n, p->size());
  std::vector<Fr> out(n, Fr::zero());
  for (auto& [c, p] : terms)
    for (std::size_t i = 0; i < p->size(); ++i) out[i] += c * (*p)[i];
  return out;
}

}  // namespace

const char* col_name(Col c) {
  static const char* names[kNumCols] = {"W", "B", "S", "C", "T", "U", "X"};
  return names[c];
}

Layout make_layout(unsigned n_lap, std::size_t d) {
  if (d == 0) throw std::invalid_argument("dimension must be positive");
  if (n_lap < 2) throw std::invalid_argument("sampling circuit too small");
  Layout l;
  l.n_lap = n_lap;
  l.d = d;
  l.log_L = ceil_log2(n_lap);
  l.log_D = ceil_log2(d);
  l.log_N = l.log_L + l.log_D;
  // The argument needs at least four rows for the quotient degree bound.
  if (l.log_N < 2) l.log_L += 2 - l.log_N, l.log_N = 2;
  l.L = std::size_t(1) << l.log_L;
  l.D = std::size_t(1) << l.log_D;
  l.N = std::size_t(1) << l.log_N;
  return l;
}

std::size_t instance_formula(unsigned n_lap, std::size_t d) { return 4 * d * n_lap + d; }

std::size_t ConstraintSystem::instance_count() const {
  // c1, c2, c4 on bit rows, c3 on chain rows, c5, c6 on dimension rows.
  std::size_t n = 0;
  for (std::size_t r = 0; r < layout.N; ++r) {
    bool bit = !pub_values[kSelBit][r].is_zero();
    bool chain = !(pub_values[kSelInit][r] + pub_values[kSelOr][r] + pub_values[kSelAnd][r]).is_zero();
    bool dim = !pub_values[kSelDim][r].is_zero();
    n += (bit ? 3 : 0) + (chain ? 1 : 0) + (dim ? 2 : 0);
  }
  return n;
}

ConstraintSystem build_constraints(const LaplaceParams& lp, std::size_t d) {
  ConstraintSystem cs;
  cs.params = lp;
  cs.layout = make_layout(lp.n_lap, d);
  const Layout& L = cs.layout;
  cs.domain = algebra::domain_generate<Fr>(L.log_N);
  cs.coset_domain = algebra::domain_generate<Fr>(L.log_N + 2);
  cs.coset_shift = Fr::generator();
  cs.qnr = randomness::lprf_qnr();

  for (unsigned p = 0; p < kNumPub; ++p)
    if (p != kY) cs.pub_values[p].assign(L.N, Fr::zero());
  auto& P = cs.pub_values;

  // Per-slot pattern, identical for every dimension block.
  std::vector<int> chain(lp.n_lap, -1);  // 0 init, 1 or, 2 and
  std::vector<Fr> wgt(lp.n_lap, Fr::zero());
  auto coin = [&](unsigned off, const randomness::BernoulliParams& b) {
    chain[off + b.nu - 1] = 0;
    for (unsigned i = 0; i + 1 < b.nu; ++i) chain[off + i] = b.beta[i] ? 1 : 2;
  };
  coin(lp.zero_offset(), lp.zero_params);
  for (unsigned i = 0; i < lp.gamma; ++i) {
    coin(lp.mag_offset(i), lp.mag_params[i]);
    wgt[lp.mag_offset(i)] = Fr::from_u64(std::uint64_t(1) << i);
  }
  for (std::size_t j = 0; j < d; ++j) {
    for (unsigned s = 0; s < lp.n_lap; ++s) {
      std::size_t r = L.row(j, s);
      P[kK][r] = Fr::from_u64(j * lp.n_lap + s);
      P[kSelBit][r] = Fr::one();
      if (chain[s] == 0) P[kSelInit][r] = Fr::one();
      if (chain[s] == 1) P[kSelOr][r] = Fr::one();
      if (chain[s] == 2) P[kSelAnd][r] = Fr::one();
      P[kWgt][r] = wgt[s];
      if (s + 1 < lp.n_lap) P[kSelCont][r] = Fr::one();
    }
    P[kSelDim][L.row(j, 0)] = Fr::one();
  }
  for (unsigned p = 0; p < kNumPub; ++p) {
    if (p == kY) continue;
    cs.pub_coeffs[p] = algebra::ntt(P[p], cs.domain);
    cs.pub_coset[p] = algebra::coset_evaluate(cs.pub_coeffs[p], cs.coset_shift, cs.coset_domain);
  }

  const Fr one = Fr::one();
  auto& C = cs.constraints;
  C.push_back({"lprf.square", Part::lprf, [one](const Env& e, const Fr& qnr) {
                 Fr b = e.col(kB, 0), w = e.col(kW, 0);
                 return e.pub(kSelBit) * (w * w - ((one - b) * qnr + b) * (e.pub(kK) + e.col(kS, 0)));
               }});
  C.push_back({"lprf.bit", Part::lprf, [one](const Env& e, const Fr&) {
                 Fr b = e.col(kB, 0);
                 return e.pub(kSelBit) * b * (one - b);
               }});
  C.push_back({"lap.chain", Part::lap, [](const Env& e, const Fr&) {
                 Fr c = e.col(kC, 0), cn = e.col(kC, 1), b = e.col(kB, 0);
                 return e.pub(kSelInit) * (c - b) + e.pub(kSelOr) * (c - cn - b + cn * b) +
                        e.pub(kSelAnd) * (c - cn * b);
               }});
  C.push_back({"lap.magnitude", Part::lap, [](const Env& e, const Fr&) {
                 return e.pub(kSelBit) * (e.col(kT, 0) - e.pub(kSelCont) * e.col(kT, 1) - e.pub(kWgt) * e.col(kC, 0));
               }});
  C.push_back({"lap.sign", Part::lap, [one](const Env& e, const Fr&) {
                 Fr b = e.col(kB, 0);
                 return e.pub(kSelDim) * (e.col(kU, 0) - (b + b - one) * (one + e.col(kT, 0)));
               }});
  C.push_back({"out.relation", Part::lap, [one](const Env& e, const Fr&) {
                 return e.pub(kSelDim) * (e.pub(kY) - e.col(kX, 0) - (one - e.col(kC, 1)) * e.col(kU, 0));
               }});

  Hasher h("vddp.vddlm.cs");
  h.update(randomness::to_config(lp)).update_u64(d).update_u64(L.N);
  cs.digest = h.finish();
  return cs;
}

CircuitWitness assign_witness(const ConstraintSystem& cs, const Fr& s_prime, const randomness::LprfOutput& lprf,
                              std::span<const Fr> x_share) {
  const auto& lp = cs.params;
  const Layout& L = cs.layout;
  if (lprf.bits.size() != L.d * lp.n_lap || lprf.witnesses.size() != lprf.bits.size())
    throw std::invalid_argument("LPRF output length mismatch");
  if (x_share.size() != L.d) throw std::invalid_argument("share length mismatch");
  CircuitWitness w;
  for (auto& c : w.cols) c.assign(L.N, Fr::zero());
  w.cols[kS].assign(L.N, s_prime);
  for (std::size_t j = 0; j < L.d; ++j) {
    std::span<const std::uint8_t> bits(lprf.bits.data() + j * lp.n_lap, lp.n_lap);
    auto res = randomness::c_lap_flat(bits, lp);
    for (unsigned s = 0; s < lp.n_lap; ++s) {
      std::size_t r = L.row(j, s);
      w.cols[kB][r] = Fr::from_u64(bits[s]);
      w.cols[kW][r] = lprf.witnesses[j * lp.n_lap + s].x;
    }
    auto place = [&](unsigned off, const randomness::BerResult& br) {
      for (std::size_t k = 0; k < br.trace.size(); ++k)
        w.cols[kC][L.row(j, unsigned(off + br.trace.size() - 1 - k))] = Fr::from_u64(br.trace[k]);
    };
    place(lp.zero_offset(), res.trace.zero);
    for (unsigned i = 0; i < lp.gamma; ++i) place(lp.mag_offset(i), res.trace.mag[i]);
    // Suffix sums of wgt·C.
    Fr acc = Fr::zero();
    for (unsigned s = lp.n_lap; s-- > 0;) {
      std::size_t r = L.row(j, s);
      acc += cs.pub_values[kWgt][r] * w.cols[kC][r];
      w.cols[kT][r] = acc;
    }
    std::size_t r0 = L.row(j, 0);
    w.cols[kU][r0] = Fr::from_i64(2 * std::int64_t(res.trace.sign_bit) - 1) * Fr::from_i64(res.trace.magnitude);
    w.cols[kX][r0] = x_share[j];
    w.y.push_back(x_share[j] + Fr::from_i64(res.noise));
    w.noise.push_back(res.noise);
    w.traces.push_back(res.trace);
  }
  return w;
}

std::vector<Fr> y_column(const ConstraintSystem& cs, std::span<const Fr> y) {
  auto c = y_coeffs(cs, y);
  c.resize(cs.layout.N, Fr::zero());
  return algebra::intt(std::move(c), cs.domain);
}

std::vector<std::string> violated_constraints(const ConstraintSystem& cs, const ColumnValues& cols,
                                              std::span<const Fr> y) {
  std::array<const std::vector<Fr>*, kNumCols> cp{};
  for (unsigned c = 0; c < kNumCols; ++c) {
    if (cols[c].size() != cs.layout.N) throw std::invalid_argument("column length mismatch");
    cp[c] = &cols[c];
  }
  auto ycol = y_column(cs, y);
  std::array<const std::vector<Fr>*, kNumPub> pp{};
  for (unsigned p = 0; p < kNumPub; ++p) pp[p] = p == kY ? &ycol : &cs.pub_values[p];
  std::vector<std::string> bad;
  for (auto& c : cs.constraints) {
    for (std::size_t r = 0; r < cs.layout.N; ++r) {
      TableEnv env(cp, pp, r, 1, cs.layout.N);
      if (!c.eval(env, cs.qnr).is_zero()) {
        bad.push_back(c.name);
        break;
      }
    }
  }
  return bad;
}

ColumnPoly mask_column(const ConstraintSystem& cs, std::span<const Fr> values, Rng& rng) {
  if (values.size() != cs.layout.N) throw std::invalid_argument("column length mismatch");
  ColumnPoly out;
  out.F = algebra::ntt(std::vector<Fr>(values.begin(), values.end()), cs.domain);
  out.F.resize(cs.layout.N + kMaskLen, Fr::zero());
  for (std::size_t i = 0; i < kMaskLen; ++i) {
    Fr b = Fr::random(rng);
    out.F[i] -= b;
    out.F[cs.layout.N + i] += b;
  }
  out.R = random_vec(rng, kMaskLen);
  return out;
}

std::vector<Col> part_columns(Part p) {
  if (p == Part::lprf) return {kW, kB, kS};
  return {kB, kC, kT, kU, kX};
}

std::vector<Col> part_rotated(Part p) {
  if (p == Part::lprf) return {};
  return {kC, kT};
}

Col part_linearized(Part p) { return p == Part::lprf ? kS : kX; }

void prove_circuit(Session& s, const ConstraintSystem& cs, const PublicParams& pp, const CircuitStmt& st,
                   const ColumnPolys& cols, Rng& rng) {
  if (pp.max_degree < cs.layout.required_degree()) throw commit::DegreeOverflow();
  const Part part = st.part;
  s.statement("circ.stmt", stmt_bytes(cs, st));
  {
    Writer w;
    for (Col c : fresh_columns(st)) w.put(kzg_commit(cols[c].F, cols[c].R, pp));
    s.send("circ.cols", w.take());
  }
  Fr eta = s.challenge("circ.eta");

  // Quotient on the 4N coset.
  const std::size_t M = cs.coset_domain.size, N = cs.layout.N;
  std::array<std::vector<Fr>, kNumCols> ce;
  std::array<const std::vector<Fr>*, kNumCols> cp{};
  for (Col c : part_columns(part)) {
    ce[c] = algebra::coset_evaluate(cols[c].F, cs.coset_shift, cs.coset_domain);
    cp[c] = &ce[c];
  }
  std::vector<Fr> ycos;
  std::array<const std::vector<Fr>*, kNumPub> pubp{};
  for (unsigned p = 0; p < kNumPub; ++p) pubp[p] = &cs.pub_coset[p];
  if (part == Part::lap) {
    ycos = algebra::coset_evaluate(y_coeffs(cs, st.y), cs.coset_shift, cs.coset_domain);
    pubp[kY] = &ycos;
  } else {
    pubp[kY] = nullptr;
  }
  // Z on the coset takes four values: ξ^N·ω_4^k − 1.
  Fr xin = cs.coset_shift.pow(std::uint64_t(N));
  Fr w4 = Fr::root_of_unity(2);
  std::array<Fr, 4> zinv;
  for (unsigned k = 0; k < 4; ++k) zinv[k] = (xin * w4.pow(k) - Fr::one()).inv();
  std::vector<Fr> qv(M);
  for (std::size_t k = 0; k < M; ++k) {
    TableEnv env(cp, pubp, k, 4, M);
    qv[k] = combine(cs, part, env, eta) * zinv[k % 4];
  }
  auto Q = algebra::coset_interpolate(std::move(qv), cs.coset_shift, cs.coset_domain);
  Q.resize(std::min(Q.size(), cs.layout.required_degree() + 1));
  auto RQ = random_vec(rng, kQuotRandLen);
  s.send("circ.q", pack(kzg_commit(Q, RQ, pp)));
  Fr u = s.challenge("circ.u");
  Fr wu = u * cs.domain.omega;

  auto at_u = opened_at_u(part);
  auto rot = part_rotated(part);
  std::vector<Fr> eu, ru, ew, rw;
  for (Col c : at_u) {
    eu.push_back(algebra::poly_eval<Fr>(cols[c].F, u));
    ru.push_back(algebra::poly_eval<Fr>(cols[c].R, u));
  }
  for (Col c : rot) {
    ew.push_back(algebra::poly_eval<Fr>(cols[c].F, wu));
    rw.push_back(algebra::poly_eval<Fr>(cols[c].R, wu));
  }
  // Linearization: evaluate the combination with the prover's column values.
  PointEnv env = public_at(cs, st, u);
  for (std::size_t i = 0; i < at_u.size(); ++i) env.at_u[at_u[i]] = eu[i];
  for (std::size_t i = 0; i < rot.size(); ++i) env.at_w[rot[i]] = ew[i];
  auto lf = linear_form(cs, part, env, eta);
  Fr zu = cs.domain.vanishing_at(u);
  Col lin = part_linearized(part);
  std::vector<Fr> LF = lin_comb({{zu, &Q}, {-lf.kappa, &cols[lin].F}});
  std::vector<Fr> LR = lin_comb({{zu, &RQ}, {-lf.kappa, &cols[lin].R}});
  Fr rho_lin = algebra::poly_eval<Fr>(LR, u);
  {
    Writer w;
    w.raw(fr_list(eu));
    w.raw(fr_list(ru));
    w.raw(fr_list(ew));
    w.raw(fr_list(rw));
    w.put(rho_lin);
    s.send("circ.evals", w.take());
  }
  Fr nu = s.challenge("circ.nu");

  std::vector<std::pair<Fr, const std::vector<Fr>*>> tf{{Fr::one(), &LF}}, tr{{Fr::one(), &LR}};
  Fr pw = nu;
  for (Col c : at_u) {
    tf.push_back({pw, &cols[c].F});
    tr.push_back({pw, &cols[c].R});
    pw *= nu;
  }
  auto gu = kzg_open(lin_comb(tf), lin_comb(tr), u, pp).opening.gamma;
  G1 gw = G1::identity();
  if (!rot.empty()) {
    std::vector<std::pair<Fr, const std::vector<Fr>*>> wf, wr;
    pw = Fr::one();
    for (Col c : rot) {
      wf.push_back({pw, &cols[c].F});
      wr.push_back({pw, &cols[c].R});
      pw *= nu;
    }
    gw = kzg_open(lin_comb(wf), lin_comb(wr), wu, pp).opening.gamma;
  }
  s.send("circ.open", pack(gu, gw));
}

CircuitView read_circuit(Cursor& c, const ConstraintSystem& cs, const CircuitStmt& st) {
  c.statement("circ.stmt", stmt_bytes(cs, st));
  CircuitView v;
  {
    Reader r(c.prover("circ.cols"));
    for (unsigned k = 0; k < kNumCols; ++k)
      if (st.given[k]) v.coms[k] = *st.given[k];
    for (Col k : fresh_columns(st)) v.coms[k] = r.get<G1>();
    r.expect_done();
  }
  v.eta = c.challenge("circ.eta");
  unpack(c.prover("circ.q"), v.com_q);
  v.u = c.challenge("circ.u");
  {
    const auto& b = c.prover("circ.evals");
    std::size_t nu = opened_at_u(st.part).size(), nw = part_rotated(st.part).size();
    std::size_t pos = 0;
    auto take = [&](std::size_t n) {
      std::size_t len = 4 + 32 * n;
      if (b.size() < pos + len) throw DecodeError("circuit: truncated evaluations");
      auto out = read_fr_list(std::span(b).subspan(pos, len), n);
      pos += len;
      return out;
    };
    v.eval_u = take(nu);
    v.rho_u = take(nu);
    v.eval_w = take(nw);
    v.rho_w = take(nw);
    unpack(std::span(b).subspan(pos), v.rho_lin);
  }
  v.nu = c.challenge("circ.nu");
  unpack(c.prover("circ.open"), v.gamma_u, v.gamma_w);
  return v;
}

Verdict verify_circuit(const ConstraintSystem& cs, const PublicParams& pp, const CircuitStmt& st,
                       const CircuitView& v) {
  if (st.part == Part::lap && st.y.size() != cs.layout.d) return Verdict::reject("output share length mismatch");
  auto claims = build_claims(cs, st, v);
  if (part_rotated(st.part).empty()) claims.pop_back();
  if (!commit::kzg_batch_verify(claims, pp)) return Verdict::reject("circuit opening check failed");
  return Verdict::accept();
}

CircuitView simulate_circuit(const ConstraintSystem& cs, const PublicParams& pp, const CircuitStmt& st, Rng& rng) {
  if (!pp.trapdoor) throw std::invalid_argument("simulation needs the setup trapdoor");
  const Fr tau = *pp.trapdoor;
  CircuitView v;
  for (unsigned k = 0; k < kNumCols; ++k) v.coms[k] = st.given[k] ? *st.given[k] : commit::g_mul(Fr::random(rng), pp);
  v.eta = Fr::random(rng);
  v.com_q = commit::g_mul(Fr::random(rng), pp);
  v.u = Fr::random(rng);
  std::size_t nu = opened_at_u(st.part).size(), nw = part_rotated(st.part).size();
  v.eval_u = random_vec(rng, nu);
  v.rho_u = random_vec(rng, nu);
  v.eval_w = random_vec(rng, nw);
  v.rho_w = random_vec(rng, nw);
  v.rho_lin = Fr::random(rng);
  v.nu = Fr::random(rng);
  v.gamma_u = v.gamma_w = G1::identity();
  // γ = (com − g^y h^ρ)^{1/(τ − x)} opens any claim.
  auto claims = build_claims(cs, st, v);
  auto open = [&](const KzgClaim& c) {
    return (c.com - commit::pedersen_commit(c.y, c.opening.rho, pp)) * (tau - c.x).inv();
  };
  v.gamma_u = open(claims[0]);
  if (nw) v.gamma_w = open(claims[1]);
  return v;
}

void write_circuit(sigma::Transcript& t, const ConstraintSystem& cs, const CircuitStmt& st, const CircuitView& v) {
  t.append(Role::statement, "circ.stmt", stmt_bytes(cs, st));
  Writer w;
  for (Col k : fresh_columns(st)) w.put(v.coms[k]);
  t.append(Role::prover, "circ.cols", w.take());
  t.append(Role::verifier, "circ.eta", fr_bytes(v.eta));
  t.append(Role::prover, "circ.q", pack(v.com_q));
  t.append(Role::verifier, "circ.u", fr_bytes(v.u));
  Writer e;
  e.raw(fr_list(v.eval_u));
  e.raw(fr_list(v.rho_u));
  e.raw(fr_list(v.eval_w));
  e.raw(fr_list(v.rho_w));
  e.put(v.rho_lin);
  t.append(Role::prover, "circ.evals", e.take());
  t.append(Role::verifier, "circ.nu", fr_bytes(v.nu));
  t.append(Role::prover, "circ.open", pack(v.gamma_u, v.gamma_w));
}

}  // namespace vddp::vddlm
