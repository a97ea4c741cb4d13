#include "vddp/algebra/curve.hpp"

#include <optional>

#include "vddp/common/hash.hpp"

namespace vddp::algebra {

using detail::Fp2;
using detail::Jacobian;

namespace {

Fp fp_from_be(std::span<const std::uint8_t> b) {
  std::array<std::uint8_t, 48> le;
  for (int i = 0; i < 48; ++i) le[i] = b[47 - i];
  return Fp::from_bytes(le);
}

Fp fp_from_hex(std::string_view hex) { return fp_from_be(from_hex(hex)); }

void fp_to_be(const Fp& x, std::uint8_t* out) {
  auto le = x.to_bytes();
  for (int i = 0; i < 48; ++i) out[i] = le[47 - i];
}

std::optional<Fp> fp_sqrt(const Fp& a) {
  auto e = Fp::modulus();
  Fp::Limbs one{};
  one[0] = 1;
  detail::add_into(e, one);
  Fp s = a.pow(detail::shr(e, 2));
  if (s.square() == a) return s;
  return std::nullopt;
}

const Fp& b1() {
  static const Fp b = Fp::from_u64(4);
  return b;
}

const Fp2& b2() {
  static const Fp2 b{Fp::from_u64(4), Fp::from_u64(4)};
  return b;
}

template <class Fq>
bool jac_on_curve(const Jacobian<Fq>& p, const Fq& b) {
  if (p.is_infinity()) return true;
  Fq z2 = p.Z.square(), z6 = z2.square() * z2;
  return p.Y.square() == p.X.square() * p.X + b * z6;
}

constexpr std::uint8_t kCompressed = 0x80, kInfinity = 0x40, kSign = 0x20;

// BLS12-381 G1 cofactor.
constexpr std::array<u64, 2> kG1Cofactor = {0x8c00aaab0000aaabULL, 0x396c8c005555e156ULL};

}  // namespace

const G1& G1::generator() {
  static const G1 g(G1Affine{
      fp_from_hex("17f1d3a73197d7942695638c4fa9ac0fc3688c4f9774b905a14e3a3f171bac586c55e83ff97a1aeffb3af00adb22c6bb"),
      fp_from_hex("08b3f481e3aaa0f1a09e30ed741d8ae4fcf5e095d5d00af600db18cb2c04b3edd03cc744a2888ae40caa232946c5e7e1"),
      false});
  return g;
}

bool G1::is_on_curve() const { return jac_on_curve(p_, b1()); }

bool G1::in_subgroup() const {
  auto r = Fr::modulus();
  return p_.mul(r).is_infinity();
}

std::vector<G1Affine> G1::batch_to_affine(std::span<const G1> pts) {
  std::vector<Jacobian<Fp>> j(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) j[i] = pts[i].p_;
  std::vector<G1Affine> out(pts.size());
  detail::batch_to_affine<Fp>(j, out);
  return out;
}

std::array<std::uint8_t, G1::kBytes> G1::to_bytes() const {
  std::array<std::uint8_t, kBytes> out{};
  if (is_identity()) {
    out[0] = kCompressed | kInfinity;
    return out;
  }
  auto a = to_affine();
  fp_to_be(a.x, out.data());
  out[0] |= kCompressed;
  if (a.y.is_lexicographically_largest()) out[0] |= kSign;
  return out;
}

G1 G1::from_bytes(std::span<const std::uint8_t> b) {
  if (b.size() != kBytes) throw DecodeError("G1: wrong length");
  std::uint8_t flags = b[0] & 0xe0;
  if (!(flags & kCompressed)) throw DecodeError("G1: uncompressed encoding not supported");
  std::array<std::uint8_t, kBytes> x;
  std::copy(b.begin(), b.end(), x.begin());
  x[0] &= 0x1f;
  if (flags & kInfinity) {
    bool zero = true;
    for (auto v : x) zero = zero && v == 0;
    if (!zero || (flags & kSign)) throw DecodeError("G1: malformed infinity");
    return G1();
  }
  Fp xf = fp_from_be(x);
  auto y = fp_sqrt(xf.square() * xf + b1());
  if (!y) throw DecodeError("G1: x not on curve");
  if (y->is_lexicographically_largest() != bool(flags & kSign)) *y = -*y;
  G1 p(G1Affine{xf, *y, false});
  if (!p.in_subgroup()) throw DecodeError("G1: not in prime-order subgroup");
  return p;
}

G1 G1::hash_to_curve(std::string_view domain, std::span<const std::uint8_t> msg) {
  for (std::uint64_t ctr = 0;; ++ctr) {
    std::array<std::uint8_t, 64> wide;
    for (std::uint64_t half = 0; half < 2; ++half) {
      Hasher h("vddp.h2c.g1");
      h.update_u64(domain.size()).update(domain).update(msg).update_u64(ctr).update_u64(half);
      auto d = h.finish();
      std::copy(d.begin(), d.end(), wide.begin() + 32 * half);
    }
    Fp x = Fp::from_bytes_wide(wide);
    auto y = fp_sqrt(x.square() * x + b1());
    if (!y) continue;
    if (wide[0] & 1) *y = -*y;
    Jacobian<Fp> p = Jacobian<Fp>::from_affine({x, *y, false});
    p = p.mul(kG1Cofactor);
    if (p.is_infinity()) continue;
    return G1(p);
  }
}

G1 G1::random(Rng& rng) { return generator() * Fr::random(rng); }

const G2& G2::generator() {
  static const G2 g(G2Affine{
      Fp2{fp_from_hex("024aa2b2f08f0a91260805272dc51051c6e47ad4fa403b02b4510b647ae3d1770bac0326a805bbefd48056c8c121bdb8"),
          fp_from_hex("13e02b6052719f607dacd3a088274f65596bd0d09920b61ab5da61bbdc7f5049334cf11213945d57e5ac7d055d042b7e")},
      Fp2{fp_from_hex("0ce5d527727d6e118cc9cdc6da2e351aadfd9baa8cbdd3a76d429a695160d12c923ac9cc3baca289e193548608b82801"),
          fp_from_hex("0606c4a02ea734cc32acd2b02bc28b99cb3e287e85a763af267492ab572e99ab3f370d275cec1da1aaa9075ff05f79be")},
      false});
  return g;
}

bool G2::is_on_curve() const { return jac_on_curve(p_, b2()); }

bool G2::in_subgroup() const {
  auto r = Fr::modulus();
  return p_.mul(r).is_infinity();
}

std::array<std::uint8_t, G2::kBytes> G2::to_bytes() const {
  std::array<std::uint8_t, kBytes> out{};
  if (is_identity()) {
    out[0] = kCompressed | kInfinity;
    return out;
  }
  auto a = to_affine();
  fp_to_be(a.x.c1, out.data());
  fp_to_be(a.x.c0, out.data() + 48);
  out[0] |= kCompressed;
  if (a.y.is_lexicographically_largest()) out[0] |= kSign;
  return out;
}

G2 G2::from_bytes(std::span<const std::uint8_t> b) {
  if (b.size() != kBytes) throw DecodeError("G2: wrong length");
  std::uint8_t flags = b[0] & 0xe0;
  if (!(flags & kCompressed)) throw DecodeError("G2: uncompressed encoding not supported");
  std::array<std::uint8_t, kBytes> x;
  std::copy(b.begin(), b.end(), x.begin());
  x[0] &= 0x1f;
  if (flags & kInfinity) {
    bool zero = true;
    for (auto v : x) zero = zero && v == 0;
    if (!zero || (flags & kSign)) throw DecodeError("G2: malformed infinity");
    return G2();
  }
  Fp2 xf{fp_from_be(std::span(x).subspan(48, 48)), fp_from_be(std::span(x).subspan(0, 48))};
  auto y = (xf.square() * xf + b2()).sqrt();
  if (!y) throw DecodeError("G2: x not on curve");
  if (y->is_lexicographically_largest() != bool(flags & kSign)) *y = -*y;
  G2 p(G2Affine{xf, *y, false});
  if (!p.in_subgroup()) throw DecodeError("G2: not in prime-order subgroup");
  return p;
}

GT GT::pow(const Fr& e) const {
  ++op_counts().gt_exp;
  auto l = e.to_limbs();
  detail::Fp12 r = detail::Fp12::one();
  for (std::size_t i = l.size(); i-- > 0;)
    for (int b = 63; b >= 0; --b) {
      r = r.square();
      if ((l[i] >> b) & 1) r *= v_;
    }
  return GT(r);
}

FixedBaseTable::FixedBaseTable(const G1& base) {
  constexpr int kWindows = 32, kDigits = 255;
  std::vector<Jacobian<Fp>> pts;
  pts.reserve(kWindows * kDigits);
  Jacobian<Fp> wbase = base.jac();
  for (int w = 0; w < kWindows; ++w) {
    Jacobian<Fp> cur = wbase;
    for (int d = 1; d <= kDigits; ++d) {
      pts.push_back(cur);
      cur = cur.add(wbase);
    }
    wbase = cur;  // 256 · previous window base
  }
  table_.resize(pts.size());
  detail::batch_to_affine<Fp>(pts, table_);
}

G1 FixedBaseTable::mul(const Fr& s) const {
  ++op_counts().g1_exp;
  auto l = s.to_limbs();
  Jacobian<Fp> acc = Jacobian<Fp>::infinity();
  for (int w = 0; w < 32; ++w) {
    unsigned d = unsigned(l[w / 8] >> (8 * (w % 8))) & 0xff;
    if (d) acc = acc.add_mixed(table_[std::size_t(w) * 255 + d - 1]);
  }
  return G1(acc);
}

}  // namespace vddp::algebra
