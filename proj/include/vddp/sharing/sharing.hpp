#pragma once

#include <string>
#include <vector>

#include "vddp/algebra/poly.hpp"
#include "vddp/commit/commit.hpp"

// Additive n-out-of-n sharing of vectors over Fr, with matching shares of
// the commitment randomness.
namespace vddp::sharing {

using algebra::Fr;
using algebra::G1;
using commit::PublicParams;

using Vec = std::vector<Fr>;

struct ShareSet {
  std::vector<Vec> shares;       // [d][n]
  std::vector<Vec> rand_shares;  // [d][n]

  std::size_t dim() const { return shares.size(); }
  std::size_t servers() const { return shares.empty() ? 0 : shares[0].size(); }
  // Server i's share vector and randomness share vector.
  Vec share_of(std::size_t i) const;
  Vec rand_of(std::size_t i) const;
};

// First n−1 shares uniform, the last closes the sum. The randomness r is
// shared the same way; the overload without r samples it.
ShareSet secret_share(std::span<const Fr> v, std::span<const Fr> r, std::size_t n, Rng& rng);
ShareSet secret_share(std::span<const Fr> v, std::size_t n, Rng& rng);

// Coordinatewise sums. rec_sec takes one vector per server; aggr_share one
// vector per client. Empty input gives the zero vector of length `dim`.
Vec rec_sec(const std::vector<Vec>& per_server, std::size_t dim = 0);
Vec aggr_share(const std::vector<Vec>& per_client, std::size_t dim = 0);

// Vector commitment: v and r read as evaluations on the domain of size
// nextpow2(len), interpolated, and committed with hiding KZG.
struct ShareCommitment {
  G1 com;
  Digest pp_fingerprint{};  // all-zero marks the identity, compatible with any pp
};

unsigned vector_log_size(std::size_t len);
// Coefficients of the polynomial through v on the size-2^log domain (zero padded).
std::vector<Fr> vector_poly(std::span<const Fr> v, unsigned log_size);

ShareCommitment commit_share(std::span<const Fr> share, std::span<const Fr> rand_share, const PublicParams& pp);
// Product across servers (reconstructs the commitment to the secret) and
// across clients (commitment to the aggregated share). Mixed parameters throw.
ShareCommitment rec_data_com(const std::vector<ShareCommitment>& coms);
ShareCommitment aggr_share_com(const std::vector<ShareCommitment>& coms);

// Share file: magic, n, d, server index, pp fingerprint, then d value
// scalars and d randomness scalars.
struct ShareFile {
  std::uint32_t n = 0, index = 0;
  Digest pp_fingerprint{};
  Vec values, rand;
};
Bytes serialize_share_file(const ShareFile& f);
ShareFile deserialize_share_file(std::span<const std::uint8_t> data);
void save_share_file(const ShareFile& f, const std::string& path);
ShareFile load_share_file(const std::string& path);

}  // namespace vddp::sharing
