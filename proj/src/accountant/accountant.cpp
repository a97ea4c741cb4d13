#include "vddp/accountant/accountant.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace vddp::accountant {

using randomness::noise_probability;
using randomness::noise_pmf;

namespace {

struct Best {
  Rational ratio{0};
  std::int64_t r = 0;
  bool reverse = false;

  // Offers both P(r)/P(r−Δ) = w and its reciprocal.
  void offer(const Rational& w, std::int64_t at) {
    if (w > ratio) ratio = w, r = at, reverse = false;
    Rational inv = 1 / w;
    if (inv > ratio) ratio = inv, r = at, reverse = true;
  }
};

std::vector<std::int64_t> escaping_points(std::int64_t B, int delta) {
  std::vector<std::int64_t> out;
  for (std::int64_t i = 0; i < delta && -B + i <= B; ++i) out.push_back(-B + i);
  return out;
}

PrivacyReport finish(const LaplaceParams& lp, int delta_sens, const Best& best, Rational delta) {
  PrivacyReport rep;
  rep.n_lap = lp.n_lap;
  rep.delta_sens = delta_sens;
  rep.delta = std::move(delta);
  rep.max_ratio = best.ratio;
  rep.epsilon = log_rational(best.ratio);
  rep.witness.r = best.r;
  rep.witness.reverse = best.reverse;
  rep.witness.escaping = escaping_points(lp.max_abs(), delta_sens);

  Rational step = ratio_zero(lp);
  if (1 / step > step) step = 1 / step;
  for (unsigned i = 0; i < lp.gamma; ++i) {
    Rational a = ratio_mag(lp, i);
    if (a > step) step = a;
    if (1 / a > step) step = 1 / a;
  }
  rep.epsilon_bound = log_rational(step) * delta_sens;
  return rep;
}

PrivacyReport trivial(const LaplaceParams& lp, int delta_sens, Rational delta) {
  Best b;
  b.ratio = 1;
  return finish(lp, delta_sens, b, std::move(delta));
}

void check_sens(int delta_sens) {
  if (delta_sens < 0) throw std::invalid_argument("sensitivity must be non-negative");
}

}  // namespace

Rational ratio_zero(const LaplaceParams& lp) {
  Rational one_minus = 1;
  for (auto& m : lp.mag_params) one_minus *= 1 - m.realized_p;
  const Rational& pz = lp.zero_params.realized_p;
  return 2 * pz / ((1 - pz) * one_minus);
}

Rational ratio_mag(const LaplaceParams& lp, unsigned i) {
  if (i >= lp.gamma) throw std::out_of_range("magnitude coin index");
  const Rational& p = lp.mag_params[i].realized_p;
  Rational a = p / (1 - p);
  for (unsigned j = 0; j < i; ++j) {
    const Rational& q = lp.mag_params[j].realized_p;
    a *= (1 - q) / q;
  }
  return a;
}

PrivacyReport laplace_dp_closed_form(const LaplaceParams& lp, int delta_sens) {
  check_sens(delta_sens);
  if (lp.gamma > kClosedFormMaxGamma) throw std::invalid_argument("gamma exceeds closed-form bound");
  const std::int64_t B = lp.max_abs();
  const std::int64_t D = delta_sens;
  if (D == 0) return trivial(lp, 0, Rational(0));
  Rational delta = 0;
  for (std::int64_t i = 0; i < D && -B + i <= B; ++i) delta += noise_probability(lp, -B + i);
  if (D > 2 * B) return trivial(lp, delta_sens, delta);

  Best best;
  // Windows that contain the steps into and out of 0.
  for (std::int64_t r = std::max<std::int64_t>(0, -B + D); r <= std::min(B, D); ++r)
    best.offer(noise_probability(lp, r) / noise_probability(lp, r - D), r);

  // Windows on one side of 0: P(m+Δ+1)/P(m+1) = Π_i w_i^{bit_i(m+Δ) − bit_i(m)}
  // with w_i = p_i/(1−p_i), over m + Δ < B. Max/min over m by a DP on the
  // carry of m + Δ, bit by bit from the bottom.
  if (D < B) {
    struct State {
      bool live = false;
      Rational hi, lo;
      std::uint64_t m_hi = 0, m_lo = 0;
    };
    State st[2];
    st[0].live = true;
    st[0].hi = st[0].lo = 1;
    for (unsigned i = 0; i < lp.gamma; ++i) {
      const Rational& p = lp.mag_params[i].realized_p;
      const Rational w = p / (1 - p), winv = (1 - p) / p;
      const unsigned di = (D >> i) & 1;
      State nx[2];
      for (unsigned c = 0; c < 2; ++c) {
        if (!st[c].live) continue;
        for (unsigned mi = 0; mi < 2; ++mi) {
          unsigned s = mi + di + c, out = s & 1, carry = s >> 1;
          int e = int(out) - int(mi);
          auto scale = [&](const Rational& v) { return e > 0 ? v * w : e < 0 ? v * winv : v; };
          Rational hi = scale(st[c].hi), lo = scale(st[c].lo);
          std::uint64_t bit = std::uint64_t(mi) << i;
          State& t = nx[carry];
          if (!t.live || hi > t.hi) t.hi = hi, t.m_hi = st[c].m_hi | bit;
          if (!t.live || lo < t.lo) t.lo = lo, t.m_lo = st[c].m_lo | bit;
          t.live = true;
        }
      }
      st[0] = std::move(nx[0]);
      st[1] = std::move(nx[1]);
    }
    if (st[0].live) {
      // Positive side realizes f(m) at r = m+Δ+1, the negative side 1/f(m) at r = −(m+1).
      best.offer(st[0].hi, std::int64_t(st[0].m_hi) + D + 1);
      best.offer(st[0].lo, std::int64_t(st[0].m_lo) + D + 1);
    }
  }
  return finish(lp, delta_sens, best, delta);
}

PrivacyReport laplace_dp_exact(const LaplaceParams& lp, int delta_sens) {
  check_sens(delta_sens);
  if (lp.gamma > kExactMaxGamma) throw std::invalid_argument("gamma exceeds enumeration bound");
  auto pmf = noise_pmf(lp);
  const std::int64_t B = pmf.bound();
  const std::int64_t D = delta_sens;
  Rational delta = 0;
  for (std::int64_t r = -B; r <= B; ++r)
    if (pmf.at(r - D) == 0) delta += pmf.at(r);
  if (D == 0) return trivial(lp, 0, delta);
  Best best;
  bool any = false;
  for (std::int64_t r = -B; r <= B; ++r) {
    const Rational& p = pmf.at(r);
    const Rational& q = pmf.at(r - D);
    if (p == 0 || q == 0) continue;
    best.offer(p / q, r);
    any = true;
  }
  if (!any) best.ratio = 1;
  return finish(lp, delta_sens, best, delta);
}

Rational expected_l1(const LaplaceParams& lp) {
  Rational s = 1;
  for (unsigned i = 0; i < lp.gamma; ++i) s += Rational(BigInt(1) << i) * lp.mag_params[i].realized_p;
  return (1 - lp.zero_params.realized_p) * s;
}

Rational rr_ratio(const std::vector<std::uint64_t>& A, std::uint64_t omega_size) {
  if (A.empty()) throw std::invalid_argument("empty scheme");
  std::uint64_t sum = 0;
  for (auto a : A) {
    if (a > omega_size - sum) throw std::invalid_argument("scheme does not sum to |Ω|");
    sum += a;
  }
  if (sum != omega_size) throw std::invalid_argument("scheme does not sum to |Ω|");
  if (A.size() == 1) return Rational(1);
  std::uint64_t mx = *std::max_element(A.begin(), A.end());
  std::uint64_t mn = *std::min_element(A.begin() + 1, A.end());
  if (mn == 0) throw std::domain_error("infinite epsilon");
  return Rational(BigInt(mx), BigInt(mn));
}

Real rr_epsilon(const std::vector<std::uint64_t>& A, std::uint64_t omega_size) {
  return log_rational(rr_ratio(A, omega_size));
}

Suggestion suggest_params(double epsilon_target, const Rational& delta_target, int delta_sens) {
  if (!(epsilon_target > 0) || !(delta_target > 0) || delta_target >= 1)
    throw std::invalid_argument("targets must satisfy ε > 0 and 0 < δ < 1");
  if (delta_sens < 1) throw std::invalid_argument("sensitivity must be positive");
  const double ln_2_over_delta = log_rational(2 / delta_target, 64).convert_to<double>();
  const Real eps_t(epsilon_target);

  std::optional<Suggestion> found;
  double miss_score = std::numeric_limits<double>::infinity();
  std::string miss;
  const double t0 = delta_sens / epsilon_target;
  for (int k = -2; k <= 12; ++k) {
    // Scale rounded to 1/1024 so the config stays a short decimal.
    double td = t0 * std::pow(2.0, k / 2.0);
    Rational t(BigInt(static_cast<long long>(std::llround(td * 1024))), BigInt(1024));
    if (t <= 0) continue;
    int c = static_cast<int>(std::ceil(std::log2(td * ln_2_over_delta)));
    for (int g = std::max(0, c - 2); g <= std::min<int>(c + 2, kClosedFormMaxGamma); ++g) {
      for (unsigned nu : {16u, 24u, 32u}) {
        LaplaceParams lp;
        try {
          lp = randomness::derive_bernoulli(t, unsigned(g), nu);
        } catch (const randomness::PrecisionCollapse&) {
          continue;
        }
        if (found && lp.n_lap >= found->params.n_lap) continue;
        auto rep = laplace_dp_closed_form(lp, delta_sens);
        if (rep.epsilon <= eps_t && rep.delta <= delta_target) {
          found = Suggestion{lp, rep};
          continue;
        }
        double score = std::max(rep.epsilon.convert_to<double>() / epsilon_target, to_double(rep.delta / delta_target));
        if (score < miss_score) {
          miss_score = score;
          std::ostringstream os;
          os << "t=" << rational_to_string(t) << " gamma=" << g << " nu=" << nu
             << " epsilon=" << rep.epsilon.convert_to<double>() << " delta=" << to_double(rep.delta);
          miss = os.str();
        }
      }
    }
  }
  if (!found) throw std::runtime_error("no feasible configuration; nearest miss: " + miss);
  return *found;
}

std::string report_to_json(const PrivacyReport& r, unsigned n_servers) {
  nlohmann::ordered_json j;
  j["epsilon"] = r.epsilon.convert_to<double>();
  j["epsilon_exact"] = r.epsilon.str(40);
  j["epsilon_bound"] = r.epsilon_bound.convert_to<double>();
  j["max_ratio"] = rational_to_string(r.max_ratio);
  j["delta"] = rational_to_string(r.delta);
  j["sensitivity"] = r.delta_sens;
  j["n_lap"] = r.n_lap;
  j["witness"] = {{"r", r.witness.r}, {"reverse", r.witness.reverse}, {"escaping", r.witness.escaping}};
  j["ddp_tolerance"] = n_servers == 0 ? 0 : n_servers - 1;
  return j.dump(2);
}

}  // namespace vddp::accountant
