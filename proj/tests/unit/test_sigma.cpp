#include <gtest/gtest.h>

#include "vddp/algebra/poly.hpp"
#include "vddp/sigma/evsc.hpp"

using namespace vddp;
using namespace vddp::algebra;
using namespace vddp::sigma;
using commit::pedersen_commit;

namespace {

const PublicParams& params() {
  static const PublicParams pp = commit::setup(16, std::string_view("test-sigma"));
  return pp;
}

Session live(std::uint64_t seed) { return Session::interactive(Rng(seed).derive("verifier")); }

std::vector<Fr> random_poly(Rng& rng, std::size_t n) {
  std::vector<Fr> v(n);
  for (auto& x : v) x = Fr::random(rng);
  return v;
}

struct ProdCase {
  ProdStmt st;
  ProdWitness w;
};

ProdCase prod_case(Rng& rng, Fr z, Fr x) {
  auto& pp = params();
  ProdWitness w{z * x, Fr::random(rng), z, Fr::random(rng), x, Fr::random(rng)};
  ProdStmt st{pedersen_commit(w.y, w.r_y, pp), pedersen_commit(w.z, w.r_z, pp), pedersen_commit(w.x, w.r_x, pp)};
  return {st, w};
}

struct EvscCase {
  EvscStmt st;
  EvscWitness w;
};

EvscCase evsc_case(Rng& rng, std::vector<Fr> F) {
  auto& pp = params();
  EvscWitness w;
  w.x = Fr::random(rng);
  w.y = poly_eval<Fr>(F, w.x);
  w.r_x = Fr::random(rng);
  w.r_y = Fr::random(rng);
  w.F = F;
  EvscStmt st{pedersen_commit(w.y, w.r_y, pp), pedersen_commit(w.x, w.r_x, pp), commit::kzg_commit(F, {}, pp)};
  return {st, w};
}

}  // namespace

// ------------------------------------------------------------ plumbing

TEST(Transcript, BinaryRoundtripAndJson) {
  Transcript t;
  t.append(Role::statement, "s", {1, 2});
  t.append(Role::prover, "a", {0xab, 0xcd});
  t.append(Role::verifier, "c", {});
  auto b = t.serialize();
  auto back = Transcript::deserialize(b);
  EXPECT_EQ(back.serialize(), b);
  ASSERT_EQ(back.size(), 3u);
  EXPECT_EQ(back.entries()[1].label, "a");
  EXPECT_EQ(back.prover_bytes(), 2u);
  auto js = t.to_json();
  EXPECT_NE(js.find("\"abcd\""), std::string::npos);
  EXPECT_NE(js.find("\"verifier\""), std::string::npos);

  auto bad = b;
  bad[4] = 7;  // role tag of the first entry
  EXPECT_THROW(Transcript::deserialize(bad), DecodeError);
  EXPECT_THROW(Transcript::deserialize(std::span(b).first(b.size() - 1)), DecodeError);
}

TEST(Transcript, FiatShamirPrefixDeterminism) {
  auto run = [](std::uint8_t last) {
    auto s = Session::fiat_shamir("dom");
    s.statement("stmt", {1});
    s.send("m", {2, last});
    return s.challenge("c");
  };
  EXPECT_EQ(run(3), run(3));
  EXPECT_NE(run(3), run(4));
  auto a = Session::fiat_shamir("dom-a"), b = Session::fiat_shamir("dom-b");
  EXPECT_NE(a.challenge("c"), b.challenge("c"));
}

TEST(Transcript, ScriptedChallenges) {
  auto s = Session::scripted({Fr::from_u64(5), Fr::from_u64(6)});
  EXPECT_EQ(s.challenge("a"), Fr::from_u64(5));
  EXPECT_EQ(s.challenge("b"), Fr::from_u64(6));
  EXPECT_THROW(s.challenge("c"), std::logic_error);
}

TEST(Transcript, FiatShamirReverificationIsBitStable) {
  auto& pp = params();
  Rng rng(20);
  auto pc = prod_case(rng, Fr::random(rng), Fr::random(rng));
  auto s = Session::fiat_shamir("vddp.test.prod");
  Rng prng(21);
  ASSERT_TRUE(run_prod(s, pp, pc.st, pc.w, prng));
  auto bytes = s.transcript().serialize();
  for (int rep = 0; rep < 3; ++rep) {
    auto t = Transcript::deserialize(bytes);
    EXPECT_EQ(t.serialize(), bytes);
    EXPECT_TRUE(check_fiat_shamir(t, "vddp.test.prod"));
    Cursor c(t);
    EXPECT_TRUE(verify_prod(pp, pc.st, read_prod(c, pc.st)));
    EXPECT_TRUE(c.done());
  }
  // Same witness and prover randomness give the same bytes.
  auto s2 = Session::fiat_shamir("vddp.test.prod");
  Rng prng2(21);
  prove_prod(s2, pp, pc.st, pc.w, prng2);
  EXPECT_EQ(s2.transcript().serialize(), bytes);
  // A changed prover message invalidates the recorded challenge.
  auto t = Transcript::deserialize(bytes);
  Transcript forged;
  for (auto e : t.entries()) {
    if (e.label == "prod.a") e.data[5] ^= 1;
    forged.append(e.role, e.label, e.data);
  }
  EXPECT_FALSE(check_fiat_shamir(forged, "vddp.test.prod"));
  EXPECT_FALSE(check_fiat_shamir(t, "other-domain"));
}

TEST(Transcript, StatementMismatchRejects) {
  auto& pp = params();
  Rng rng(22);
  Fr x = Fr::random(rng), r = Fr::random(rng);
  OpeningStmt st{pedersen_commit(x, r, pp)};
  auto s = live(1);
  prove_opening(s, pp, st, {x, r}, rng);
  Cursor c(s.transcript());
  OpeningStmt other{st.com + pp.g};
  EXPECT_THROW(read_opening(c, other), DecodeError);
}

// ------------------------------------------------------------- opening

TEST(Opening, Completeness1000) {
  auto& pp = params();
  Rng rng(30);
  auto s = live(30);
  for (int i = 0; i < 1000; ++i) {
    Fr x = Fr::random(rng), r = Fr::random(rng);
    ASSERT_TRUE(run_opening(s, pp, {pedersen_commit(x, r, pp)}, {x, r}, rng)) << i;
  }
}

TEST(Opening, WrongWitnessRejects) {
  auto& pp = params();
  Rng rng(31);
  int rejects = 0;
  for (int i = 0; i < 100; ++i) {
    Fr x = Fr::random(rng), r = Fr::random(rng);
    auto s = live(100 + i);
    rejects += !run_opening(s, pp, {pedersen_commit(x, r, pp)}, {x + Fr::one(), r}, rng).accepted;
  }
  EXPECT_EQ(rejects, 100);
}

TEST(Opening, TwoTranscriptExtraction) {
  auto& pp = params();
  Rng rng(32);
  for (int i = 0; i < 20; ++i) {
    Fr x = Fr::random(rng), r = Fr::random(rng);
    OpeningStmt st{pedersen_commit(x, r, pp)};
    Rng fork = rng.derive("fork", i);
    Rng p1 = fork, p2 = fork;
    auto s1 = Session::scripted({Fr::random(rng)});
    auto s2 = Session::scripted({Fr::random(rng)});
    ASSERT_TRUE(run_opening(s1, pp, st, {x, r}, p1));
    ASSERT_TRUE(run_opening(s2, pp, st, {x, r}, p2));
    Cursor c1(s1.transcript()), c2(s2.transcript());
    auto v1 = read_opening(c1, st), v2 = read_opening(c2, st);
    ASSERT_EQ(v1.a, v2.a);
    auto w = extract_opening(v1, v2);
    EXPECT_EQ(w.x, x);
    EXPECT_EQ(w.r, r);
  }
}

TEST(Opening, TamperedMessagesReject) {
  auto& pp = params();
  Rng rng(33);
  Fr x = Fr::random(rng), r = Fr::random(rng);
  OpeningStmt st{pedersen_commit(x, r, pp)};
  {
    auto s = live(2);
    s.set_tamper([](std::size_t, const std::string& l, Bytes& b) {
      if (l == "open.s") b.pop_back();
    });
    auto v = run_opening(s, pp, st, {x, r}, rng);
    EXPECT_FALSE(v);
    EXPECT_NE(v.reason.find("malformed"), std::string::npos);
  }
  {
    auto s = live(3);
    s.set_tamper([](std::size_t, const std::string& l, Bytes& b) {
      if (l == "open.s") b[0] ^= 1;
    });
    auto v = run_opening(s, pp, st, {x, r}, rng);
    EXPECT_FALSE(v);
    EXPECT_EQ(v.reason, "verification equation failed");
  }
  {
    auto s = live(4);
    s.set_tamper([&](std::size_t, const std::string& l, Bytes& b) {
      if (l == "open.a") b = pack(pp.g);
    });
    EXPECT_FALSE(run_opening(s, pp, st, {x, r}, rng));
  }
}

TEST(Opening, SimulatorVerifies) {
  auto& pp = params();
  Rng rng(34);
  for (int i = 0; i < 50; ++i) {
    OpeningStmt st{G1::random(rng)};
    auto v = simulate_opening(pp, st, rng);
    EXPECT_TRUE(verify_opening(pp, st, v));
    Transcript t;
    write_opening(t, st, v);
    Cursor c(t);
    EXPECT_TRUE(verify_opening(pp, st, read_opening(c, st)));
  }
}

// ------------------------------------------------------------- product

TEST(Prod, ZeroProduct) {
  auto& pp = params();
  Rng rng(40);
  auto pc = prod_case(rng, Fr::zero(), Fr::random(rng));
  auto s = live(40);
  EXPECT_TRUE(run_prod(s, pp, pc.st, pc.w, rng));
}

TEST(Prod, Completeness1000) {
  auto& pp = params();
  Rng rng(41);
  auto s = live(41);
  for (int i = 0; i < 1000; ++i) {
    auto pc = prod_case(rng, Fr::random(rng), Fr::random(rng));
    ASSERT_TRUE(run_prod(s, pp, pc.st, pc.w, rng)) << i;
  }
}

TEST(Prod, PublicProductAsGy) {
  auto& pp = params();
  Rng rng(42);
  Fr z = Fr::random(rng), x = Fr::random(rng), rz = Fr::random(rng), rx = Fr::random(rng);
  ProdStmt st{commit::g_mul(z * x, pp), pedersen_commit(z, rz, pp), pedersen_commit(x, rx, pp)};
  auto s = live(42);
  EXPECT_TRUE(run_prod(s, pp, st, {z * x, Fr::zero(), z, rz, x, rx}, rng));
}

TEST(Prod, WrongProductRejects) {
  auto& pp = params();
  Rng rng(43);
  int rejects = 0;
  for (int i = 0; i < 100; ++i) {
    auto pc = prod_case(rng, Fr::random(rng), Fr::random(rng));
    pc.w.y += Fr::one();
    pc.st.com_y = pedersen_commit(pc.w.y, pc.w.r_y, pp);
    auto s = live(200 + i);
    rejects += !run_prod(s, pp, pc.st, pc.w, rng).accepted;
  }
  EXPECT_EQ(rejects, 100);
}

TEST(Prod, TwoTranscriptExtraction) {
  auto& pp = params();
  Rng rng(44);
  for (int i = 0; i < 10; ++i) {
    auto pc = prod_case(rng, Fr::random(rng), Fr::random(rng));
    Rng fork = rng.derive("fork", i);
    Rng p1 = fork, p2 = fork;
    auto s1 = Session::scripted({Fr::random(rng)});
    auto s2 = Session::scripted({Fr::random(rng)});
    ASSERT_TRUE(run_prod(s1, pp, pc.st, pc.w, p1));
    ASSERT_TRUE(run_prod(s2, pp, pc.st, pc.w, p2));
    Cursor c1(s1.transcript()), c2(s2.transcript());
    auto w = extract_prod(read_prod(c1, pc.st), read_prod(c2, pc.st));
    EXPECT_EQ(w.x, pc.w.x);
    EXPECT_EQ(w.z, pc.w.z);
    EXPECT_EQ(w.y, w.z * w.x);
    EXPECT_EQ(pedersen_commit(w.y, w.r_y, pp), pc.st.com_y);
    EXPECT_EQ(pedersen_commit(w.x, w.r_x, pp), pc.st.com_x);
    EXPECT_EQ(pedersen_commit(w.z, w.r_z, pp), pc.st.com_z);
  }
}

TEST(Prod, SimulatorVerifies) {
  auto& pp = params();
  Rng rng(45);
  for (int i = 0; i < 50; ++i) {
    ProdStmt st{G1::random(rng), G1::random(rng), G1::random(rng)};
    auto v = simulate_prod(pp, st, rng);
    Transcript t;
    write_prod(t, st, v);
    Cursor c(t);
    EXPECT_TRUE(verify_prod(pp, st, read_prod(c, st)));
  }
}

// ------------------------------------------------------------------ or

TEST(Or, BitsAccept) {
  auto& pp = params();
  Rng rng(50);
  for (int b = 0; b <= 1; ++b) {
    Fr r = Fr::random(rng);
    auto s = live(50 + b);
    EXPECT_TRUE(run_or(s, pp, {pedersen_commit(Fr::from_u64(b), r, pp)}, {Fr::from_u64(b), r}, rng)) << b;
  }
}

TEST(Or, Completeness1000) {
  auto& pp = params();
  Rng rng(51);
  auto s = live(51);
  for (int i = 0; i < 1000; ++i) {
    Fr b = Fr::from_u64(rng.bit()), r = Fr::random(rng);
    ASSERT_TRUE(run_or(s, pp, {pedersen_commit(b, r, pp)}, {b, r}, rng)) << i;
  }
}

TEST(Or, NonBitRejects) {
  auto& pp = params();
  Rng rng(52);
  int rejects = 0;
  for (int i = 0; i < 100; ++i) {
    Fr b = Fr::from_u64(2), r = Fr::random(rng);
    auto s = live(300 + i);
    rejects += !run_or(s, pp, {pedersen_commit(b, r, pp)}, {b, r}, rng).accepted;
  }
  EXPECT_EQ(rejects, 100);
}

TEST(Or, SimulatorVerifies) {
  auto& pp = params();
  Rng rng(53);
  for (int i = 0; i < 50; ++i) {
    OrStmt st{G1::random(rng)};
    auto v = simulate_or(pp, st, rng);
    Transcript t;
    write_or(t, st, v);
    Cursor c(t);
    EXPECT_TRUE(verify_or(pp, st, read_or(c, st)));
  }
}

// ------------------------------------------------------------ equality

namespace {
EqStmt eq_stmt(const EqWitness& w, Fr v_kzg) {
  auto& pp = params();
  std::vector<Fr> f{v_kzg};
  return {pedersen_commit(w.v, w.r, pp), commit::kzg_commit(f, w.R, pp), w.R.size()};
}
}  // namespace

TEST(Eq, ZeroAndRandomAccept) {
  auto& pp = params();
  Rng rng(60);
  for (std::size_t len : {1u, 3u, 9u}) {
    for (Fr v : {Fr::zero(), Fr::random(rng)}) {
      EqWitness w{v, Fr::random(rng), random_poly(rng, len)};
      auto s = live(60 + len);
      EXPECT_TRUE(run_eq(s, pp, eq_stmt(w, v), w, rng)) << len;
    }
  }
}

TEST(Eq, Completeness1000) {
  auto& pp = params();
  Rng rng(61);
  auto s = live(61);
  for (int i = 0; i < 1000; ++i) {
    EqWitness w{Fr::random(rng), Fr::random(rng), random_poly(rng, 1 + i % 3)};
    ASSERT_TRUE(run_eq(s, pp, eq_stmt(w, w.v), w, rng)) << i;
  }
}

TEST(Eq, MismatchRejects) {
  auto& pp = params();
  Rng rng(62);
  int rejects = 0;
  for (int i = 0; i < 100; ++i) {
    EqWitness w{Fr::random(rng), Fr::random(rng), random_poly(rng, 2)};
    auto st = eq_stmt(w, w.v + Fr::one());
    auto s = live(400 + i);
    rejects += !run_eq(s, pp, st, w, rng).accepted;
  }
  EXPECT_EQ(rejects, 100);
}

TEST(Eq, SimulatorVerifies) {
  auto& pp = params();
  Rng rng(63);
  for (int i = 0; i < 20; ++i) {
    EqStmt st{G1::random(rng), G1::random(rng), 2};
    auto v = simulate_eq(pp, st, rng);
    Transcript t;
    write_eq(t, st, v);
    Cursor c(t);
    EXPECT_TRUE(verify_eq(pp, st, read_eq(c, st)));
  }
}

// ---------------------------------------------------------------- dlog

TEST(Dlog, HonestAndWrong) {
  auto& pp = params();
  Rng rng(70);
  for (int i = 0; i < 100; ++i) {
    Fr r = Fr::random(rng);
    DlogStmt st{commit::h_mul(r, pp)};
    auto s = live(500 + i);
    EXPECT_TRUE(run_dlog(s, pp, st, r, rng));
    EXPECT_FALSE(run_dlog(s, pp, st, r + Fr::one(), rng));
    auto v = simulate_dlog(pp, st, rng);
    EXPECT_TRUE(verify_dlog(pp, st, v));
  }
}

// ---------------------------------------------------------------- evsc

TEST(Evsc, ConstantPolynomial) {
  auto& pp = params();
  Rng rng(80);
  auto ec = evsc_case(rng, {Fr::random(rng)});
  EXPECT_EQ(ec.w.y, ec.w.F[0]);
  auto s = live(80);
  auto v = run_evsc(s, pp, ec.st, ec.w, rng);
  EXPECT_TRUE(v) << v.reason;
}

TEST(Evsc, Completeness1000) {
  auto& pp = params();
  Rng rng(81);
  auto s = live(81);
  for (int i = 0; i < 1000; ++i) {
    auto ec = evsc_case(rng, random_poly(rng, 9));
    auto v = run_evsc(s, pp, ec.st, ec.w, rng);
    ASSERT_TRUE(v) << i << " " << v.reason;
  }
}

TEST(Evsc, WrongValueRejects) {
  auto& pp = params();
  Rng rng(82);
  int rejects = 0;
  for (int i = 0; i < 100; ++i) {
    auto ec = evsc_case(rng, random_poly(rng, 9));
    ec.w.y += Fr::one();
    ec.st.com_y = pedersen_commit(ec.w.y, ec.w.r_y, pp);
    auto s = live(600 + i);
    rejects += !run_evsc(s, pp, ec.st, ec.w, rng).accepted;
  }
  EXPECT_EQ(rejects, 100);
}

TEST(Evsc, RechallengeOnCollision) {
  auto& pp = params();
  Rng rng(83);
  auto ec = evsc_case(rng, random_poly(rng, 5));
  Fr u2 = Fr::random(rng);
  // Prover message, then challenges u = x (forces a retry) and u2, then prod.
  auto s = Session::scripted({ec.w.x, u2, Fr::random(rng)});
  auto from = s.transcript().size();
  ASSERT_TRUE(run_evsc(s, pp, ec.st, ec.w, rng));
  Cursor c(s.transcript(), from);
  auto v = read_evsc(c, pp, ec.st);
  EXPECT_EQ(v.retries, 1u);
  EXPECT_EQ(v.u, u2);
  v.retries = kEvscMaxRetries + 1;
  EXPECT_FALSE(verify_evsc(pp, ec.st, v));
}

TEST(Evsc, TamperedOpeningsReject) {
  auto& pp = params();
  Rng rng(84);
  auto ec = evsc_case(rng, random_poly(rng, 9));
  for (const char* label : {"evsc.com_fp", "evsc.z", "evsc.open_f", "evsc.open_fp", "prod.s"}) {
    auto s = live(84);
    std::string target = label;
    s.set_tamper([&](std::size_t, const std::string& l, Bytes& b) {
      if (l == target) b[b.size() - 20] ^= 1;
    });
    EXPECT_FALSE(run_evsc(s, pp, ec.st, ec.w, rng)) << label;
  }
}

TEST(Evsc, FiatShamirTranscriptReverifies) {
  auto& pp = params();
  Rng rng(85);
  auto ec = evsc_case(rng, random_poly(rng, 9));
  auto s = Session::fiat_shamir("vddp.test.evsc");
  ASSERT_TRUE(run_evsc(s, pp, ec.st, ec.w, rng));
  auto t = Transcript::deserialize(s.transcript().serialize());
  EXPECT_TRUE(check_fiat_shamir(t, "vddp.test.evsc"));
  Cursor c(t);
  EXPECT_TRUE(verify_evsc(pp, ec.st, read_evsc(c, pp, ec.st)));
  EXPECT_TRUE(c.done());
}

TEST(Evsc, SimulatorVerifies) {
  auto& pp = params();
  Rng rng(86);
  for (int i = 0; i < 30; ++i) {
    // Consistent statement built from known values; the simulator only sees
    // the commitments and the public F.
    auto ec = evsc_case(rng, random_poly(rng, 1 + i % 10));
    auto v = simulate_evsc(pp, ec.st, ec.w.F, rng);
    Transcript t;
    write_evsc(t, pp, ec.st, v);
    Cursor c(t);
    EXPECT_TRUE(verify_evsc(pp, ec.st, read_evsc(c, pp, ec.st))) << i;
  }
}
