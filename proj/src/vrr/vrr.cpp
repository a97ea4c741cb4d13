#include "vddp/vrr/vrr.hpp"

namespace vddp::vrr {

using commit::g_mul;
using commit::pedersen_commit;
using sigma::Cursor;
using sigma::Role;
using sigma::Session;
using sigma::Verdict;
using sigma::pack;
using sigma::unpack;

namespace {

Bytes stmt_bytes(const VrrContext& ctx, const VrrStmt& st) {
  return pack(st.com, st.psi, ctx.com_F, Fr::from_u64(st.i_phi));
}

Bytes fr_bytes(const Fr& x) {
  auto b = x.to_bytes();
  return Bytes(b.begin(), b.end());
}

// F + α(X^{|Ω|} − 1)
std::vector<Fr> fused_poly(const RrScheme& s, const Fr& alpha) {
  std::vector<Fr> f = s.F_coeffs;
  f.resize(s.omega_size + 1, Fr::zero());
  f[0] -= alpha;
  f[s.omega_size] += alpha;
  return f;
}

}  // namespace

RrScheme build_scheme(unsigned K, const std::vector<Rational>& probs, unsigned m) {
  return build_scheme_over<Fr>(K, probs, std::uint64_t(1) << m, Fr::root_of_unity(m));
}

unsigned nearest_admissible_k(unsigned K) {
  if (K < 2) K = 2;
  for (unsigned d = 0;; ++d) {
    if (K > d + 1 && Fr::order_divides(K - d)) return K - d;
    if (Fr::order_divides(K + d)) return K + d;
  }
}

VrrContext make_context(const RrScheme& scheme, const PublicParams& pp) {
  if (pp.max_degree < scheme.omega_size) throw commit::DegreeOverflow();
  VrrContext ctx;
  ctx.scheme = &scheme;
  ctx.pp = &pp;
  ctx.com_F = commit::kzg_commit(scheme.F_coeffs, {}, pp);
  ctx.com_F_omega = G1(pp.g_powers[scheme.omega_size]) - pp.g;
  return ctx;
}

VrrClient make_client_with_sigma(const VrrContext& ctx, const Fr& x, const Fr& sigma, Rng& rng) {
  VrrClient c;
  c.x = x;
  c.r_x = Fr::random(rng);
  c.sigma = sigma;
  c.r_sigma = Fr::random(rng);
  c.com = pedersen_commit(c.x, c.r_x, *ctx.pp);
  c.psi = pedersen_commit(c.sigma, c.r_sigma, *ctx.pp);
  return c;
}

VrrClient make_client(const VrrContext& ctx, const Fr& x, std::uint64_t i_sigma, Rng& rng) {
  if (!ctx.scheme->in_subgroup(x)) throw std::invalid_argument("input outside the output subgroup");
  auto c = make_client_with_sigma(ctx, x, ctx.scheme->omega.pow(i_sigma % ctx.scheme->omega_size), rng);
  c.i_sigma = i_sigma % ctx.scheme->omega_size;
  return c;
}

G1 vrr_com_t(const VrrContext& ctx, const VrrStmt& st) {
  return st.psi * ctx.scheme->omega.pow(st.i_phi % ctx.scheme->omega_size);
}

sigma::EvscStmt vrr_evsc_stmt(const VrrContext& ctx, const VrrStmt& st, const G1& com_z, const Fr& alpha) {
  return {com_z, vrr_com_t(ctx, st), ctx.com_F + ctx.com_F_omega * alpha};
}

sigma::ProdStmt vrr_prod_stmt(const VrrContext& ctx, const VrrStmt& st, const Fr& y, const G1& com_z) {
  return {g_mul(y, *ctx.pp), com_z, st.com};
}

void prove_vrr(Session& s, const VrrContext& ctx, const VrrStmt& st, const VrrClient& c, Rng& rng, VrrCheat cheat) {
  const auto& sch = *ctx.scheme;
  const auto& pp = *ctx.pp;
  s.statement("vrr.stmt", stmt_bytes(ctx, st));
  const Fr w_phi = sch.omega.pow(st.i_phi % sch.omega_size);
  const Fr t = c.sigma * w_phi, r_t = c.r_sigma * w_phi;
  Fr z = cheat == VrrCheat::outside_domain ? Fr::one() : algebra::poly_eval(sch.F_coeffs, t);
  Fr y = c.x * z;
  if (cheat == VrrCheat::bad_y) y *= sch.chi;
  s.send("vrr.y", fr_bytes(y));
  Fr r_z = Fr::random(rng);
  Fr z_committed = cheat == VrrCheat::bad_com_z ? z * sch.chi : z;
  G1 com_z = pedersen_commit(z_committed, r_z, pp);
  s.send("vrr.com_z", pack(com_z));
  Fr alpha = s.challenge("vrr.alpha");
  sigma::EvscWitness ew{z_committed, r_z, t, r_t, fused_poly(sch, alpha)};
  sigma::prove_evsc(s, pp, vrr_evsc_stmt(ctx, st, com_z, alpha), ew, rng);
  sigma::ProdWitness pw{y, Fr::zero(), z_committed, r_z, c.x, c.r_x};
  sigma::prove_prod(s, pp, vrr_prod_stmt(ctx, st, y, com_z), pw, rng);
}

VrrView read_vrr(Cursor& c, const VrrContext& ctx, const VrrStmt& st) {
  c.statement("vrr.stmt", stmt_bytes(ctx, st));
  VrrView v;
  unpack(c.prover("vrr.y"), v.y);
  unpack(c.prover("vrr.com_z"), v.com_z);
  v.alpha = c.challenge("vrr.alpha");
  v.evsc = sigma::read_evsc(c, *ctx.pp, vrr_evsc_stmt(ctx, st, v.com_z, v.alpha));
  v.prod = sigma::read_prod(c, vrr_prod_stmt(ctx, st, v.y, v.com_z));
  return v;
}

Verdict verify_vrr(const VrrContext& ctx, const VrrStmt& st, const VrrView& v) {
  if (!ctx.scheme->in_subgroup(v.y)) return Verdict::reject("output outside the subgroup");
  if (!sigma::verify_evsc(*ctx.pp, vrr_evsc_stmt(ctx, st, v.com_z, v.alpha), v.evsc))
    return Verdict::reject("evaluation proof failed");
  if (!sigma::verify_prod(*ctx.pp, vrr_prod_stmt(ctx, st, v.y, v.com_z), v.prod))
    return Verdict::reject("product proof failed");
  return Verdict::accept();
}

VrrView simulate_vrr(const VrrContext& ctx, const VrrStmt& st, const Fr& y, Rng& rng) {
  VrrView v;
  v.y = y;
  v.com_z = pedersen_commit(Fr::random(rng), Fr::random(rng), *ctx.pp);
  v.alpha = Fr::random(rng);
  auto F = fused_poly(*ctx.scheme, v.alpha);
  v.evsc = sigma::simulate_evsc(*ctx.pp, vrr_evsc_stmt(ctx, st, v.com_z, v.alpha), F, rng);
  v.prod = sigma::simulate_prod(*ctx.pp, vrr_prod_stmt(ctx, st, v.y, v.com_z), rng);
  return v;
}

void write_vrr(sigma::Transcript& t, const VrrContext& ctx, const VrrStmt& st, const VrrView& v) {
  t.append(Role::statement, "vrr.stmt", stmt_bytes(ctx, st));
  t.append(Role::prover, "vrr.y", fr_bytes(v.y));
  t.append(Role::prover, "vrr.com_z", pack(v.com_z));
  t.append(Role::verifier, "vrr.alpha", fr_bytes(v.alpha));
  sigma::write_evsc(t, *ctx.pp, vrr_evsc_stmt(ctx, st, v.com_z, v.alpha), v.evsc);
  sigma::write_prod(t, vrr_prod_stmt(ctx, st, v.y, v.com_z), v.prod);
}

VrrOutcome run_vrr(Session& s, const VrrContext& ctx, const VrrStmt& st, const VrrClient& c, Rng& rng,
                   VrrCheat cheat) {
  auto from = s.transcript().size();
  prove_vrr(s, ctx, st, c, rng, cheat);
  try {
    Cursor cur(s.transcript(), from);
    auto v = read_vrr(cur, ctx, st);
    return {verify_vrr(ctx, st, v), v.y};
  } catch (const DecodeError& e) {
    return {Verdict::reject(std::string("malformed message: ") + e.what()), Fr::zero()};
  }
}

std::vector<Rational> histogram_estimate(const std::vector<std::uint64_t>& observed,
                                         const std::vector<std::uint64_t>& A, std::uint64_t omega_size) {
  std::vector<Rational> q;
  for (auto o : observed) q.emplace_back(BigInt(o));
  return histogram_estimate(q, A, omega_size);
}

std::vector<Rational> histogram_estimate(const std::vector<Rational>& observed, const std::vector<std::uint64_t>& A,
                                         std::uint64_t omega_size) {
  const std::size_t K = A.size();
  if (observed.size() != K) throw std::invalid_argument("dimension mismatch");
  // Augmented matrix [C | n′].
  std::vector<std::vector<Rational>> m(K, std::vector<Rational>(K + 1));
  for (std::size_t k = 0; k < K; ++k) {
    for (std::size_t j = 0; j < K; ++j) m[k][j] = Rational(BigInt(A[(k + K - j) % K]), BigInt(omega_size));
    m[k][K] = observed[k];
  }
  for (std::size_t col = 0; col < K; ++col) {
    std::size_t piv = col;
    while (piv < K && m[piv][col] == 0) ++piv;
    if (piv == K) throw std::domain_error("singular channel matrix");
    std::swap(m[piv], m[col]);
    for (std::size_t r = 0; r < K; ++r) {
      if (r == col || m[r][col] == 0) continue;
      Rational f = m[r][col] / m[col][col];
      for (std::size_t c = col; c <= K; ++c) m[r][c] -= f * m[col][c];
    }
  }
  std::vector<Rational> out(K);
  for (std::size_t k = 0; k < K; ++k) out[k] = m[k][K] / m[k][k];
  return out;
}

}  // namespace vddp::vrr
