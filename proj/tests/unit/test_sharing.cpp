#include <gtest/gtest.h>

#include <boost/math/distributions/chi_squared.hpp>
#include <cstdio>

#include "vddp/sharing/sharing.hpp"

using namespace vddp;
using namespace vddp::sharing;

namespace {

Vec random_vec(std::size_t d, Rng& rng) {
  Vec v(d);
  for (auto& x : v) x = Fr::random(rng);
  return v;
}

std::vector<Vec> per_server(const ShareSet& s) {
  std::vector<Vec> out;
  for (std::size_t i = 0; i < s.servers(); ++i) out.push_back(s.share_of(i));
  return out;
}

const PublicParams& params() {
  static PublicParams pp = commit::setup(16, "sharing-tests");
  return pp;
}

}  // namespace

TEST(SharingTest, SingleShareIsSecret) {
  Rng rng(1);
  auto v = random_vec(5, rng);
  auto s = secret_share(v, 1, rng);
  EXPECT_EQ(s.share_of(0), v);
}

TEST(SharingTest, Roundtrip) {
  Rng rng(2);
  for (std::size_t n : {2, 3, 5}) {
    auto v = random_vec(7, rng);
    Vec r = random_vec(7, rng);
    auto s = secret_share(v, r, n, rng);
    EXPECT_EQ(rec_sec(per_server(s)), v);
    std::vector<Vec> rs;
    for (std::size_t i = 0; i < n; ++i) rs.push_back(s.rand_of(i));
    EXPECT_EQ(rec_sec(rs), r);
  }
  EXPECT_THROW(secret_share(Vec{Fr::one()}, 0, rng), std::invalid_argument);
}

TEST(SharingTest, PartialSharesUniform) {
  // Low 4 bits of share 0 and share 1 (n = 3) of a fixed secret; any n−1
  // shares must look uniform.
  Rng rng(3);
  Vec v{Fr::from_u64(42)};
  std::array<std::uint64_t, 256> counts{};
  const int kSamples = 10000;
  for (int i = 0; i < kSamples; ++i) {
    auto s = secret_share(v, 3, rng);
    unsigned a = s.shares[0][0].low_u64() & 15, b = s.shares[0][1].low_u64() & 15;
    ++counts[a * 16 + b];
  }
  double expected = kSamples / 256.0, chi = 0;
  for (auto c : counts) chi += (c - expected) * (c - expected) / expected;
  boost::math::chi_squared dist(255);
  EXPECT_LT(chi, boost::math::quantile(dist, 0.99));
}

TEST(SharingTest, AggregationOracle) {
  Rng rng(4);
  const std::size_t n = 3, clients = 3, d = 8;
  std::vector<Vec> secrets;
  std::vector<ShareSet> sets;
  for (std::size_t j = 0; j < clients; ++j) {
    secrets.push_back(random_vec(d, rng));
    sets.push_back(secret_share(secrets.back(), n, rng));
  }
  std::vector<Vec> aggregated;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<Vec> from_clients;
    for (auto& s : sets) from_clients.push_back(s.share_of(i));
    aggregated.push_back(aggr_share(from_clients));
  }
  // Naive double loop.
  Vec naive(d, Fr::zero());
  for (std::size_t k = 0; k < d; ++k)
    for (std::size_t j = 0; j < clients; ++j) naive[k] += secrets[j][k];
  EXPECT_EQ(rec_sec(aggregated), naive);

  EXPECT_EQ(aggr_share({}, 4), Vec(4, Fr::zero()));
  EXPECT_THROW(aggr_share({Vec(3), Vec(4)}), std::invalid_argument);
}

TEST(SharingTest, CommitmentHomomorphism) {
  Rng rng(5);
  const auto& pp = params();
  const std::size_t n = 3, d = 8;
  auto v = random_vec(d, rng);
  auto r = random_vec(d, rng);
  auto s = secret_share(v, r, n, rng);
  std::vector<ShareCommitment> coms;
  for (std::size_t i = 0; i < n; ++i) coms.push_back(commit_share(s.share_of(i), s.rand_of(i), pp));
  auto direct = commit::kzg_commit(vector_poly(v, 3), vector_poly(r, 3), pp);
  EXPECT_EQ(rec_data_com(coms).com, direct);
  EXPECT_EQ(rec_data_com({coms[0]}).com, coms[0].com);

  // The committed polynomial evaluates to the vector on the domain.
  auto dom = algebra::domain_generate<Fr>(3);
  auto F = vector_poly(v, 3);
  for (std::size_t k = 0; k < d; ++k) EXPECT_EQ(algebra::poly_eval(F, dom.element(k)), v[k]);
}

TEST(SharingTest, AggrShareComTwoClients) {
  Rng rng(6);
  const auto& pp = params();
  auto a = random_vec(5, rng), ra = random_vec(5, rng);
  auto b = random_vec(5, rng), rb = random_vec(5, rng);
  Vec sum(5), rsum(5);
  for (int k = 0; k < 5; ++k) sum[k] = a[k] + b[k], rsum[k] = ra[k] + rb[k];
  auto agg = aggr_share_com({commit_share(a, ra, pp), commit_share(b, rb, pp)});
  EXPECT_EQ(agg.com, commit_share(sum, rsum, pp).com);
  EXPECT_TRUE(aggr_share_com({}).com.is_identity());
}

TEST(SharingTest, MixedParamsRejected) {
  Rng rng(7);
  auto other = commit::setup(16, "other-params");
  auto v = random_vec(4, rng), r = random_vec(4, rng);
  EXPECT_THROW(rec_data_com({commit_share(v, r, params()), commit_share(v, r, other)}), std::invalid_argument);
}

TEST(SharingTest, ShareFileRoundtrip) {
  Rng rng(8);
  ShareFile f;
  f.n = 3;
  f.index = 1;
  f.pp_fingerprint = params().fingerprint;
  f.values = random_vec(6, rng);
  f.rand = random_vec(6, rng);
  auto path = testing::TempDir() + "share.bin";
  save_share_file(f, path);
  auto g = load_share_file(path);
  EXPECT_EQ(g.values, f.values);
  EXPECT_EQ(g.rand, f.rand);
  EXPECT_EQ(g.pp_fingerprint, f.pp_fingerprint);
  EXPECT_EQ(g.index, 1u);

  auto b = serialize_share_file(f);
  EXPECT_THROW(deserialize_share_file(std::span(b).first(b.size() - 1)), DecodeError);
  auto bad = b;
  bad[0] ^= 1;
  EXPECT_THROW(deserialize_share_file(bad), DecodeError);
  bad = b;
  bad[16] = 9;  // index ≥ n
  EXPECT_THROW(deserialize_share_file(bad), DecodeError);
  std::remove(path.c_str());
}
