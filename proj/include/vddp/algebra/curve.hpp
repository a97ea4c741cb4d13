#pragma once

#include <array>
#include <span>
#include <string_view>
#include <vector>

#include "vddp/algebra/detail/tower.hpp"
#include "vddp/algebra/field.hpp"
#include "vddp/algebra/ops.hpp"

namespace vddp::algebra {

namespace detail {

template <class Fq>
struct Affine {
  Fq x{}, y{};
  bool infinity = true;
};

// Short Weierstrass y^2 = x^3 + b in Jacobian coordinates (x = X/Z^2,
// y = Y/Z^3); Z = 0 encodes the point at infinity. No op counting here.
template <class Fq>
struct Jacobian {
  Fq X{}, Y{}, Z{};

  static Jacobian infinity() { return {Fq::one(), Fq::one(), Fq::zero()}; }
  static Jacobian from_affine(const Affine<Fq>& a) {
    if (a.infinity) return infinity();
    return {a.x, a.y, Fq::one()};
  }
  bool is_infinity() const { return Z.is_zero(); }

  Jacobian dbl() const {
    if (is_infinity()) return *this;
    Fq A = X.square(), B = Y.square(), C = B.square();
    Fq D = ((X + B).square() - A - C).dbl();
    Fq E = A.dbl() + A, Fv = E.square();
    Jacobian r;
    r.X = Fv - D.dbl();
    Fq C8 = C.dbl().dbl().dbl();
    r.Y = E * (D - r.X) - C8;
    r.Z = (Y * Z).dbl();
    return r;
  }

  Jacobian add(const Jacobian& o) const {
    if (is_infinity()) return o;
    if (o.is_infinity()) return *this;
    Fq Z1Z1 = Z.square(), Z2Z2 = o.Z.square();
    Fq U1 = X * Z2Z2, U2 = o.X * Z1Z1;
    Fq S1 = Y * o.Z * Z2Z2, S2 = o.Y * Z * Z1Z1;
    Fq H = U2 - U1, R = (S2 - S1).dbl();
    if (H.is_zero()) return R.is_zero() ? dbl() : infinity();
    Fq I = H.dbl().square(), J = H * I, V = U1 * I;
    Jacobian r;
    r.X = R.square() - J - V.dbl();
    r.Y = R * (V - r.X) - (S1 * J).dbl();
    r.Z = ((Z + o.Z).square() - Z1Z1 - Z2Z2) * H;
    return r;
  }

  Jacobian add_mixed(const Affine<Fq>& o) const {
    if (o.infinity) return *this;
    if (is_infinity()) return from_affine(o);
    Fq Z1Z1 = Z.square();
    Fq U2 = o.x * Z1Z1, S2 = o.y * Z * Z1Z1;
    Fq H = U2 - X, R = (S2 - Y).dbl();
    if (H.is_zero()) return R.is_zero() ? dbl() : infinity();
    Fq HH = H.square(), I = HH.dbl().dbl(), J = H * I, V = X * I;
    Jacobian r;
    r.X = R.square() - J - V.dbl();
    r.Y = R * (V - r.X) - (Y * J).dbl();
    r.Z = (Z + H).square() - Z1Z1 - HH;
    return r;
  }

  Jacobian neg() const { return {X, -Y, Z}; }

  bool equals(const Jacobian& o) const {
    if (is_infinity() || o.is_infinity()) return is_infinity() && o.is_infinity();
    Fq Z1Z1 = Z.square(), Z2Z2 = o.Z.square();
    if (X * Z2Z2 != o.X * Z1Z1) return false;
    return Y * o.Z * Z2Z2 == o.Y * Z * Z1Z1;
  }

  // Fixed 4-bit window over little-endian limbs.
  Jacobian mul(std::span<const u64> e) const {
    std::array<Jacobian, 16> tbl;
    tbl[0] = infinity();
    tbl[1] = *this;
    for (int i = 2; i < 16; ++i) tbl[i] = tbl[i - 1].add(*this);
    Jacobian acc = infinity();
    bool started = false;
    for (std::size_t li = e.size(); li-- > 0;) {
      for (int nib = 15; nib >= 0; --nib) {
        unsigned d = unsigned(e[li] >> (4 * nib)) & 15;
        if (started) acc = acc.dbl().dbl().dbl().dbl();
        if (d) {
          acc = acc.add(tbl[d]);
          started = true;
        }
      }
    }
    return acc;
  }

  Affine<Fq> to_affine() const {
    if (is_infinity()) return {};
    Fq zi = Z.inv(), zi2 = zi.square();
    return {X * zi2, Y * zi2 * zi, false};
  }
};

template <class Fq>
void batch_to_affine(std::span<const Jacobian<Fq>> in, std::span<Affine<Fq>> out) {
  std::vector<Fq> zs;
  zs.reserve(in.size());
  for (auto& p : in)
    if (!p.is_infinity()) zs.push_back(p.Z);
  // Montgomery batch inversion.
  std::vector<Fq> prefix(zs.size());
  Fq acc = Fq::one();
  for (std::size_t i = 0; i < zs.size(); ++i) {
    prefix[i] = acc;
    acc *= zs[i];
  }
  Fq inv = zs.empty() ? Fq::one() : acc.inv();
  for (std::size_t i = zs.size(); i-- > 0;) {
    Fq next = inv * zs[i];
    zs[i] = inv * prefix[i];
    inv = next;
  }
  std::size_t k = 0;
  for (std::size_t i = 0; i < in.size(); ++i) {
    if (in[i].is_infinity()) {
      out[i] = {};
      continue;
    }
    Fq zi = zs[k++], zi2 = zi.square();
    out[i] = {in[i].X * zi2, in[i].Y * zi2 * zi, false};
  }
}

}  // namespace detail

using G1Affine = detail::Affine<Fp>;
using G2Affine = detail::Affine<detail::Fp2>;

class G1 {
 public:
  static constexpr std::size_t kBytes = 48;

  G1() : p_(detail::Jacobian<Fp>::infinity()) {}
  explicit G1(const detail::Jacobian<Fp>& p) : p_(p) {}
  explicit G1(const G1Affine& a) : p_(detail::Jacobian<Fp>::from_affine(a)) {}

  static G1 identity() { return G1(); }
  static const G1& generator();
  // Deterministic hash onto the prime-order subgroup (try-and-increment,
  // then cofactor clearing). Nobody knows its discrete log w.r.t. g.
  static G1 hash_to_curve(std::string_view domain, std::span<const std::uint8_t> msg);
  static G1 random(Rng& rng);

  G1 operator+(const G1& o) const {
    ++op_counts().g1_add;
    return G1(p_.add(o.p_));
  }
  G1 operator-(const G1& o) const {
    ++op_counts().g1_add;
    return G1(p_.add(o.p_.neg()));
  }
  G1 operator-() const { return G1(p_.neg()); }
  G1& operator+=(const G1& o) { return *this = *this + o; }
  G1& operator-=(const G1& o) { return *this = *this - o; }
  G1 operator*(const Fr& s) const {
    ++op_counts().g1_exp;
    auto l = s.to_limbs();
    return G1(p_.mul(l));
  }
  G1 dbl() const { return G1(p_.dbl()); }
  bool operator==(const G1& o) const { return p_.equals(o.p_); }
  bool operator!=(const G1& o) const { return !(*this == o); }
  bool is_identity() const { return p_.is_infinity(); }
  bool is_on_curve() const;
  bool in_subgroup() const;

  G1Affine to_affine() const { return p_.to_affine(); }
  static std::vector<G1Affine> batch_to_affine(std::span<const G1> pts);

  std::array<std::uint8_t, kBytes> to_bytes() const;
  // Validates the encoding, the curve equation and subgroup membership.
  static G1 from_bytes(std::span<const std::uint8_t> b);

  const detail::Jacobian<Fp>& jac() const { return p_; }

 private:
  detail::Jacobian<Fp> p_;
};

inline G1 operator*(const Fr& s, const G1& p) { return p * s; }

class G2 {
 public:
  static constexpr std::size_t kBytes = 96;

  G2() : p_(detail::Jacobian<detail::Fp2>::infinity()) {}
  explicit G2(const detail::Jacobian<detail::Fp2>& p) : p_(p) {}
  explicit G2(const G2Affine& a) : p_(detail::Jacobian<detail::Fp2>::from_affine(a)) {}

  static G2 identity() { return G2(); }
  static const G2& generator();

  G2 operator+(const G2& o) const {
    ++op_counts().g2_add;
    return G2(p_.add(o.p_));
  }
  G2 operator-(const G2& o) const {
    ++op_counts().g2_add;
    return G2(p_.add(o.p_.neg()));
  }
  G2 operator-() const { return G2(p_.neg()); }
  G2 operator*(const Fr& s) const {
    ++op_counts().g2_exp;
    auto l = s.to_limbs();
    return G2(p_.mul(l));
  }
  bool operator==(const G2& o) const { return p_.equals(o.p_); }
  bool operator!=(const G2& o) const { return !(*this == o); }
  bool is_identity() const { return p_.is_infinity(); }
  bool is_on_curve() const;
  bool in_subgroup() const;

  G2Affine to_affine() const { return p_.to_affine(); }
  std::array<std::uint8_t, kBytes> to_bytes() const;
  static G2 from_bytes(std::span<const std::uint8_t> b);

  const detail::Jacobian<detail::Fp2>& jac() const { return p_; }

 private:
  detail::Jacobian<detail::Fp2> p_;
};

inline G2 operator*(const Fr& s, const G2& p) { return p * s; }

// Target group element (order-r subgroup of Fp12*).
class GT {
 public:
  GT() : v_(detail::Fp12::one()) {}
  explicit GT(const detail::Fp12& v) : v_(v) {}
  static GT one() { return GT(); }
  GT operator*(const GT& o) const {
    ++op_counts().gt_mul;
    return GT(v_ * o.v_);
  }
  GT inv() const { return GT(v_.conj()); }
  GT pow(const Fr& e) const;
  bool operator==(const GT& o) const { return v_ == o.v_; }
  bool operator!=(const GT& o) const { return v_ != o.v_; }
  bool is_one() const { return v_.is_one(); }
  const detail::Fp12& value() const { return v_; }

 private:
  detail::Fp12 v_;
};

// Precomputed multiples of a fixed base: 8-bit windows, 32 windows.
class FixedBaseTable {
 public:
  FixedBaseTable() = default;
  explicit FixedBaseTable(const G1& base);
  G1 mul(const Fr& s) const;
  bool empty() const { return table_.empty(); }

 private:
  std::vector<G1Affine> table_;  // [window][digit-1]
};

// Σ scalars[i]·bases[i] (Pippenger bucket method for large inputs).
G1 msm(std::span<const G1Affine> bases, std::span<const Fr> scalars);
G1 msm(std::span<const G1> bases, std::span<const Fr> scalars);

}  // namespace vddp::algebra
