#include "vddp/sigma/transcript.hpp"

#include <json.hpp>

namespace vddp::sigma {

const char* role_name(Role r) {
  switch (r) {
    case Role::prover: return "prover";
    case Role::verifier: return "verifier";
    case Role::statement: return "statement";
  }
  return "?";
}

void Transcript::append(Role role, std::string label, Bytes data) {
  entries_.push_back({role, std::move(label), std::move(data)});
}

std::size_t Transcript::prover_bytes() const {
  std::size_t n = 0;
  for (auto& e : entries_)
    if (e.role == Role::prover) n += e.data.size();
  return n;
}

Bytes Transcript::serialize() const {
  Writer w;
  w.u32(static_cast<std::uint32_t>(entries_.size()));
  for (auto& e : entries_) {
    w.u8(static_cast<std::uint8_t>(e.role));
    w.blob(std::span(reinterpret_cast<const std::uint8_t*>(e.label.data()), e.label.size()));
    w.blob(e.data);
  }
  return w.take();
}

Transcript Transcript::deserialize(std::span<const std::uint8_t> data) {
  Reader r(data);
  Transcript t;
  auto n = r.u32();
  for (std::uint32_t i = 0; i < n; ++i) {
    auto role = r.u8();
    if (role > 2) throw DecodeError("transcript: bad role tag");
    auto label = r.blob();
    auto body = r.blob();
    t.append(static_cast<Role>(role), std::string(label.begin(), label.end()), std::move(body));
  }
  r.expect_done();
  return t;
}

std::string Transcript::to_json() const {
  nlohmann::json j = nlohmann::json::array();
  for (auto& e : entries_) j.push_back({{"role", role_name(e.role)}, {"label", e.label}, {"hex", to_hex(e.data)}});
  return j.dump(2);
}

FsChain::FsChain(std::string_view domain) {
  Hasher h("vddp.fs.init");
  h.update_u64(domain.size()).update(domain);
  state_ = h.finish();
}

void FsChain::absorb(const Entry& e) {
  Hasher h("vddp.fs.absorb");
  h.update(state_).update_u64(static_cast<std::uint64_t>(e.role));
  h.update_u64(e.label.size()).update(e.label);
  h.update_u64(e.data.size()).update(e.data);
  state_ = h.finish();
}

Fr FsChain::challenge(std::string_view label) const {
  std::array<std::uint8_t, 64> wide;
  for (std::uint64_t half = 0; half < 2; ++half) {
    Hasher h("vddp.fs.challenge");
    h.update(state_).update_u64(label.size()).update(label).update_u64(half);
    auto d = h.finish();
    std::copy(d.begin(), d.end(), wide.begin() + 32 * half);
  }
  return Fr::from_bytes_wide(wide);
}

bool check_fiat_shamir(const Transcript& t, std::string_view domain) {
  FsChain chain(domain);
  for (auto& e : t.entries()) {
    if (e.role == Role::verifier) {
      auto expect = chain.challenge(e.label).to_bytes();
      if (!std::equal(expect.begin(), expect.end(), e.data.begin(), e.data.end())) return false;
    }
    chain.absorb(e);
  }
  return true;
}

Session::Session(ChallengeMode m) : mode_(m) {}

Session Session::interactive(Rng verifier_rng) {
  Session s(ChallengeMode::interactive);
  s.rng_.emplace(std::move(verifier_rng));
  return s;
}

Session Session::fiat_shamir(std::string domain) {
  Session s(ChallengeMode::fiat_shamir);
  s.chain_.emplace(domain);
  s.domain_ = std::move(domain);
  return s;
}

Session Session::scripted(std::vector<Fr> challenges) {
  Session s(ChallengeMode::scripted);
  s.script_ = std::move(challenges);
  return s;
}

void Session::record(Role role, std::string label, Bytes data) {
  transcript_.append(role, std::move(label), std::move(data));
  if (chain_) chain_->absorb(transcript_.entries().back());
}

void Session::statement(std::string label, Bytes data) { record(Role::statement, std::move(label), std::move(data)); }

Bytes Session::send(std::string label, Bytes data) {
  if (tamper_) tamper_(transcript_.size(), label, data);
  Bytes delivered = data;
  record(Role::prover, std::move(label), std::move(data));
  return delivered;
}

Fr Session::challenge(std::string label) {
  Fr c;
  switch (mode_) {
    case ChallengeMode::interactive: c = Fr::random(*rng_); break;
    case ChallengeMode::fiat_shamir: c = chain_->challenge(label); break;
    case ChallengeMode::scripted:
      if (script_pos_ >= script_.size()) throw std::logic_error("scripted session: out of challenges");
      c = script_[script_pos_++];
      break;
  }
  auto b = c.to_bytes();
  record(Role::verifier, std::move(label), Bytes(b.begin(), b.end()));
  return c;
}

const Entry& Cursor::take(Role role, std::string_view label) {
  if (pos_ >= t_.size()) throw DecodeError("transcript ended early");
  auto& e = t_.entries()[pos_];
  if (e.role != role || e.label != label)
    throw DecodeError("unexpected message '" + e.label + "', wanted '" + std::string(label) + "'");
  ++pos_;
  return e;
}

void Cursor::statement(std::string_view label, std::span<const std::uint8_t> expected) {
  auto& e = take(Role::statement, label);
  if (!std::equal(e.data.begin(), e.data.end(), expected.begin(), expected.end()))
    throw DecodeError("statement mismatch");
}

const Bytes& Cursor::prover(std::string_view label) { return take(Role::prover, label).data; }

Fr Cursor::challenge(std::string_view label) { return Fr::from_bytes(take(Role::verifier, label).data); }

bool Cursor::next_is(Role role, std::string_view label) const {
  if (pos_ >= t_.size()) return false;
  auto& e = t_.entries()[pos_];
  return e.role == role && e.label == label;
}

}  // namespace vddp::sigma
