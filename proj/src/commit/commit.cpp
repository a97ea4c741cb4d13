#include "vddp/commit/commit.hpp"

#include <fstream>
#include <iterator>

#include "vddp/algebra/pairing.hpp"
#include "vddp/algebra/poly.hpp"

namespace vddp::commit {

using algebra::FixedBaseTable;

namespace {

constexpr char kMagic[8] = {'V', 'D', 'D', 'P', 'P', 'A', 'R', 'M'};
constexpr std::uint32_t kVersion = 1;

Fr derive_tau(std::span<const std::uint8_t> seed) {
  std::array<std::uint8_t, 64> wide;
  for (std::uint64_t half = 0; half < 2; ++half) {
    Hasher hs("vddp.setup.tau");
    hs.update(seed).update_u64(half);
    auto d = hs.finish();
    std::copy(d.begin(), d.end(), wide.begin() + 32 * half);
  }
  Fr tau = Fr::from_bytes_wide(wide);
  return tau.is_zero() ? Fr::one() : tau;
}

Digest fingerprint_of(const PublicParams& pp) {
  Hasher hs("vddp.pp.fingerprint");
  hs.update_u64(pp.max_degree);
  hs.update(pp.h.to_bytes());
  hs.update(G1(pp.g_powers.back()).to_bytes());
  hs.update(G1(pp.h_powers.back()).to_bytes());
  hs.update(pp.g2_tau.to_bytes());
  return hs.finish();
}

void attach_tables(PublicParams& pp) {
  pp.g_table = std::make_shared<FixedBaseTable>(pp.g);
  pp.h_table = std::make_shared<FixedBaseTable>(pp.h);
}

}  // namespace

PublicParams setup(std::size_t max_degree, std::span<const std::uint8_t> seed, bool retain_trapdoor) {
  PublicParams pp;
  pp.max_degree = max_degree;
  pp.g = G1::generator();
  pp.h = G1::hash_to_curve("vddp.setup.h", seed);
  pp.g2 = G2::generator();
  attach_tables(pp);
  Fr tau = derive_tau(seed);
  std::vector<G1> gp(max_degree + 1), hp(max_degree + 1);
  Fr cur = Fr::one();
  for (std::size_t j = 0; j <= max_degree; ++j) {
    gp[j] = pp.g_table->mul(cur);
    hp[j] = pp.h_table->mul(cur);
    cur *= tau;
  }
  pp.g_powers = G1::batch_to_affine(gp);
  pp.h_powers = G1::batch_to_affine(hp);
  pp.g2_tau = pp.g2 * tau;
  if (retain_trapdoor) pp.trapdoor = tau;
  pp.fingerprint = fingerprint_of(pp);
  return pp;
}

PublicParams setup(std::size_t max_degree, std::string_view seed, bool retain_trapdoor) {
  return setup(max_degree,
               std::span<const std::uint8_t>(reinterpret_cast<const std::uint8_t*>(seed.data()), seed.size()),
               retain_trapdoor);
}

bool check_consistency(const PublicParams& pp, Rng& rng) {
  if (pp.g_powers.size() != pp.max_degree + 1 || pp.h_powers.size() != pp.max_degree + 1) return false;
  if (G1(pp.g_powers[0]) != pp.g || G1(pp.h_powers[0]) != pp.h) return false;
  if (pp.max_degree == 0) return true;
  // Σ c_j g_j^τ = Σ c_j g_{j+1}, likewise for h, folded with fresh weights.
  std::size_t n = pp.max_degree;
  std::vector<Fr> c(n), e(n);
  for (auto& x : c) x = Fr::random(rng);
  for (auto& x : e) x = Fr::random(rng);
  std::vector<G1Affine> lo, hi;
  std::vector<Fr> w;
  for (std::size_t j = 0; j < n; ++j) {
    lo.push_back(pp.g_powers[j]);
    hi.push_back(pp.g_powers[j + 1]);
    w.push_back(c[j]);
  }
  for (std::size_t j = 0; j < n; ++j) {
    lo.push_back(pp.h_powers[j]);
    hi.push_back(pp.h_powers[j + 1]);
    w.push_back(e[j]);
  }
  G1 a = algebra::msm(std::span<const G1Affine>(lo), w);
  G1 b = algebra::msm(std::span<const G1Affine>(hi), w);
  std::vector<G1> ps{a, -b};
  std::vector<G2> qs{pp.g2_tau, pp.g2};
  return algebra::pairing_product_is_one(ps, qs);
}

bool check_consistency_at(const PublicParams& pp, std::size_t j) {
  if (j + 1 > pp.max_degree) return false;
  std::vector<G1> ps{G1(pp.g_powers[j]), -G1(pp.g_powers[j + 1])};
  std::vector<G2> qs{pp.g2_tau, pp.g2};
  return algebra::pairing_product_is_one(ps, qs);
}

Bytes serialize_params(const PublicParams& pp) {
  Writer w;
  w.raw(std::span<const std::uint8_t>(reinterpret_cast<const std::uint8_t*>(kMagic), 8));
  w.u32(kVersion);
  w.u64(pp.max_degree);
  for (auto& p : pp.g_powers) w.put(G1(p));
  for (auto& p : pp.h_powers) w.put(G1(p));
  w.put(pp.g2);
  w.put(pp.g2_tau);
  return w.take();
}

PublicParams deserialize_params(std::span<const std::uint8_t> data) {
  Reader r(data);
  auto magic = r.take(8);
  if (!std::equal(magic.begin(), magic.end(), kMagic)) throw DecodeError("params: bad magic");
  if (r.u32() != kVersion) throw DecodeError("params: unsupported version");
  PublicParams pp;
  pp.max_degree = r.u64();
  if (pp.max_degree > (std::size_t(1) << 28)) throw DecodeError("params: degree too large");
  std::vector<G1> gp(pp.max_degree + 1), hp(pp.max_degree + 1);
  for (auto& p : gp) p = r.get<G1>();
  for (auto& p : hp) p = r.get<G1>();
  pp.g2 = r.get<G2>();
  pp.g2_tau = r.get<G2>();
  r.expect_done();
  pp.g_powers = G1::batch_to_affine(gp);
  pp.h_powers = G1::batch_to_affine(hp);
  pp.g = gp[0];
  pp.h = hp[0];
  if (pp.g != G1::generator() || pp.g2 != G2::generator()) throw DecodeError("params: unexpected generators");
  attach_tables(pp);
  pp.fingerprint = fingerprint_of(pp);
  return pp;
}

void save_params(const PublicParams& pp, const std::string& path) {
  auto b = serialize_params(pp);
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path);
  f.write(reinterpret_cast<const char*>(b.data()), std::streamsize(b.size()));
}

PublicParams load_params(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path);
  Bytes b((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  return deserialize_params(b);
}

G1 pedersen_commit(const Fr& x, const Fr& r, const PublicParams& pp) {
  return pp.g_table->mul(x) + pp.h_table->mul(r);
}

G1 g_mul(const Fr& x, const PublicParams& pp) { return pp.g_table->mul(x); }
G1 h_mul(const Fr& r, const PublicParams& pp) { return pp.h_table->mul(r); }

Bytes KzgOpening::to_bytes() const {
  Writer w;
  w.put(rho);
  w.put(gamma);
  return w.take();
}

KzgOpening KzgOpening::from_bytes(std::span<const std::uint8_t> b) {
  Reader r(b);
  KzgOpening o{r.get<Fr>(), r.get<G1>()};
  r.expect_done();
  return o;
}

G1 kzg_commit(std::span<const Fr> F, std::span<const Fr> R, const PublicParams& pp) {
  if (F.size() > pp.max_degree + 1 || R.size() > pp.max_degree + 1) throw DegreeOverflow();
  if (F.size() <= 1 && R.size() <= 1)
    return pedersen_commit(F.empty() ? Fr::zero() : F[0], R.empty() ? Fr::zero() : R[0], pp);
  std::vector<G1Affine> bases;
  std::vector<Fr> sc;
  bases.reserve(F.size() + R.size());
  sc.reserve(F.size() + R.size());
  for (std::size_t i = 0; i < F.size(); ++i) {
    bases.push_back(pp.g_powers[i]);
    sc.push_back(F[i]);
  }
  for (std::size_t i = 0; i < R.size(); ++i) {
    bases.push_back(pp.h_powers[i]);
    sc.push_back(R[i]);
  }
  return algebra::msm(std::span<const G1Affine>(bases), sc);
}

KzgEval kzg_open(std::span<const Fr> F, std::span<const Fr> R, const Fr& x, const PublicParams& pp) {
  auto [qf, y] = algebra::divide_linear<Fr>(F, x);
  auto [qr, rho] = algebra::divide_linear<Fr>(R, x);
  return {y, {rho, kzg_commit(qf, qr, pp)}};
}

bool kzg_verify(const G1& com, const Fr& x, const Fr& y, const KzgOpening& op, const PublicParams& pp) {
  // e(γ, g2^τ - x·g2) · e(-(com - y·g - ρ·h), g2) = 1
  G1 lhs = com - pedersen_commit(y, op.rho, pp);
  std::vector<G1> ps{op.gamma, -lhs};
  std::vector<G2> qs{pp.g2_tau - pp.g2 * x, pp.g2};
  return algebra::pairing_product_is_one(ps, qs);
}

bool kzg_batch_verify(std::span<const KzgClaim> claims, const PublicParams& pp) {
  if (claims.empty()) return true;
  if (claims.size() == 1) return kzg_verify(claims[0].com, claims[0].x, claims[0].y, claims[0].opening, pp);
  Hasher hs("vddp.kzg.batch");
  for (auto& c : claims) {
    hs.update(c.com.to_bytes()).update(c.x.to_bytes()).update(c.y.to_bytes());
    hs.update(c.opening.rho.to_bytes()).update(c.opening.gamma.to_bytes());
  }
  auto seed = hs.finish();
  Fr xi = Fr::from_bytes_wide(seed);
  // e(Σ ξ^i γ_i, g2^τ) = e(Σ ξ^i (com_i - y_i g - ρ_i h + x_i γ_i), g2)
  std::vector<G1> gam, rhs;
  std::vector<Fr> w, wx;
  Fr yg = Fr::zero(), rh = Fr::zero(), cur = Fr::one();
  for (auto& c : claims) {
    gam.push_back(c.opening.gamma);
    w.push_back(cur);
    rhs.push_back(c.com);
    yg += cur * c.y;
    rh += cur * c.opening.rho;
    wx.push_back(cur * c.x);
    cur *= xi;
  }
  G1 gsum = algebra::msm(std::span<const G1>(gam), w);
  std::vector<G1> bases = rhs;
  std::vector<Fr> sc = w;
  bases.insert(bases.end(), gam.begin(), gam.end());
  sc.insert(sc.end(), wx.begin(), wx.end());
  G1 rsum = algebra::msm(std::span<const G1>(bases), sc) - pedersen_commit(yg, rh, pp);
  std::vector<G1> ps{gsum, -rsum};
  std::vector<G2> qs{pp.g2_tau, pp.g2};
  return algebra::pairing_product_is_one(ps, qs);
}

}  // namespace vddp::commit
