#include "vddp/sharing/sharing.hpp"

#include <fstream>
#include <iterator>
#include <stdexcept>

namespace vddp::sharing {

namespace {

Vec column(const std::vector<Vec>& m, std::size_t i) {
  Vec out(m.size());
  for (std::size_t k = 0; k < m.size(); ++k) out[k] = m[k].at(i);
  return out;
}

Vec sum_rows(const std::vector<Vec>& rows, std::size_t dim) {
  if (!rows.empty()) dim = rows[0].size();
  Vec out(dim, Fr::zero());
  for (auto& r : rows) {
    if (r.size() != dim) throw std::invalid_argument("dimension mismatch");
    for (std::size_t k = 0; k < dim; ++k) out[k] += r[k];
  }
  return out;
}

Vec split(const Fr& x, std::size_t n, Rng& rng) {
  Vec s(n);
  Fr acc = Fr::zero();
  for (std::size_t i = 0; i + 1 < n; ++i) {
    s[i] = Fr::random(rng);
    acc += s[i];
  }
  s[n - 1] = x - acc;
  return s;
}

bool is_identity_fp(const Digest& d) {
  for (auto b : d)
    if (b) return false;
  return true;
}

ShareCommitment product(const std::vector<ShareCommitment>& coms) {
  ShareCommitment out;
  out.com = G1::identity();
  for (auto& c : coms) {
    if (is_identity_fp(c.pp_fingerprint)) {
      if (!c.com.is_identity()) throw std::invalid_argument("commitment without parameter fingerprint");
      continue;
    }
    if (is_identity_fp(out.pp_fingerprint))
      out.pp_fingerprint = c.pp_fingerprint;
    else if (out.pp_fingerprint != c.pp_fingerprint)
      throw std::invalid_argument("mixed public parameters");
    out.com += c.com;
  }
  return out;
}

constexpr char kMagic[8] = {'V', 'D', 'D', 'P', 'S', 'H', 'A', 'R'};

}  // namespace

Vec ShareSet::share_of(std::size_t i) const { return column(shares, i); }
Vec ShareSet::rand_of(std::size_t i) const { return column(rand_shares, i); }

ShareSet secret_share(std::span<const Fr> v, std::span<const Fr> r, std::size_t n, Rng& rng) {
  if (n < 1) throw std::invalid_argument("need at least one share");
  if (r.size() != v.size()) throw std::invalid_argument("dimension mismatch");
  ShareSet s;
  for (std::size_t k = 0; k < v.size(); ++k) {
    s.shares.push_back(split(v[k], n, rng));
    s.rand_shares.push_back(split(r[k], n, rng));
  }
  return s;
}

ShareSet secret_share(std::span<const Fr> v, std::size_t n, Rng& rng) {
  Vec r(v.size());
  for (auto& x : r) x = Fr::random(rng);
  return secret_share(v, r, n, rng);
}

Vec rec_sec(const std::vector<Vec>& per_server, std::size_t dim) { return sum_rows(per_server, dim); }
Vec aggr_share(const std::vector<Vec>& per_client, std::size_t dim) { return sum_rows(per_client, dim); }

unsigned vector_log_size(std::size_t len) {
  unsigned m = 0;
  while ((std::size_t(1) << m) < len) ++m;
  return m;
}

std::vector<Fr> vector_poly(std::span<const Fr> v, unsigned log_size) {
  auto dom = algebra::domain_generate<Fr>(log_size);
  if (v.size() > dom.size) throw std::invalid_argument("vector longer than domain");
  Vec e(v.begin(), v.end());
  e.resize(dom.size, Fr::zero());
  return algebra::ntt(std::move(e), dom);
}

ShareCommitment commit_share(std::span<const Fr> share, std::span<const Fr> rand_share, const PublicParams& pp) {
  if (share.size() != rand_share.size()) throw std::invalid_argument("dimension mismatch");
  unsigned m = vector_log_size(share.size());
  auto F = vector_poly(share, m);
  auto R = vector_poly(rand_share, m);
  return {commit::kzg_commit(F, R, pp), pp.fingerprint};
}

ShareCommitment rec_data_com(const std::vector<ShareCommitment>& coms) { return product(coms); }
ShareCommitment aggr_share_com(const std::vector<ShareCommitment>& coms) { return product(coms); }

Bytes serialize_share_file(const ShareFile& f) {
  if (f.values.size() != f.rand.size()) throw std::invalid_argument("dimension mismatch");
  Writer w;
  w.raw(std::span<const std::uint8_t>(reinterpret_cast<const std::uint8_t*>(kMagic), 8));
  w.u32(f.n);
  w.u32(std::uint32_t(f.values.size()));
  w.u32(f.index);
  w.raw(f.pp_fingerprint);
  for (auto& x : f.values) w.put(x);
  for (auto& x : f.rand) w.put(x);
  return w.take();
}

ShareFile deserialize_share_file(std::span<const std::uint8_t> data) {
  Reader r(data);
  auto magic = r.take(8);
  if (!std::equal(magic.begin(), magic.end(), kMagic)) throw DecodeError("not a share file");
  ShareFile f;
  f.n = r.u32();
  std::uint32_t d = r.u32();
  f.index = r.u32();
  if (f.n == 0 || f.index >= f.n) throw DecodeError("bad share index");
  if (std::uint64_t(d) * 2 * Fr::kBytes > data.size()) throw DecodeError("truncated message");
  auto fp = r.take(32);
  std::copy(fp.begin(), fp.end(), f.pp_fingerprint.begin());
  f.values.resize(d);
  f.rand.resize(d);
  for (auto& x : f.values) x = r.get<Fr>();
  for (auto& x : f.rand) x = r.get<Fr>();
  r.expect_done();
  return f;
}

void save_share_file(const ShareFile& f, const std::string& path) {
  auto b = serialize_share_file(f);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path);
  out.write(reinterpret_cast<const char*>(b.data()), std::streamsize(b.size()));
}

ShareFile load_share_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  Bytes b((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return deserialize_share_file(b);
}

}  // namespace vddp::sharing
