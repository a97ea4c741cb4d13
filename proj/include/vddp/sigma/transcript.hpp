#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "vddp/algebra/field.hpp"
#include "vddp/common/bytes.hpp"
#include "vddp/common/hash.hpp"
#include "vddp/common/rng.hpp"

namespace vddp::sigma {

using algebra::Fr;

enum class Role : std::uint8_t { prover = 0, verifier = 1, statement = 2 };

const char* role_name(Role r);

struct Entry {
  Role role;
  std::string label;
  Bytes data;
};

// Ordered message log. Binary form: u32 count, then per entry
// (u8 role, blob label, blob data).
class Transcript {
 public:
  void append(Role role, std::string label, Bytes data);
  const std::vector<Entry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  // Sum of prover message sizes, the communication cost.
  std::size_t prover_bytes() const;

  Bytes serialize() const;
  static Transcript deserialize(std::span<const std::uint8_t> data);
  std::string to_json() const;

 private:
  std::vector<Entry> entries_;
};

// Hash chain over transcript entries; challenges are derived from the
// state preceding the verifier entry.
class FsChain {
 public:
  explicit FsChain(std::string_view domain);
  void absorb(const Entry& e);
  Fr challenge(std::string_view label) const;

 private:
  Digest state_;
};

// True iff every verifier entry equals the Fiat-Shamir challenge of its
// prefix under the given domain.
bool check_fiat_shamir(const Transcript& t, std::string_view domain);

enum class ChallengeMode { interactive, fiat_shamir, scripted };

// One protocol execution. The prover writes messages through send(); the
// verifier's randomness comes from challenge(). A tamper hook may rewrite
// prover messages in flight (the transcript records what was delivered).
class Session {
 public:
  using Tamper = std::function<void(std::size_t index, const std::string& label, Bytes& data)>;

  static Session interactive(Rng verifier_rng);
  static Session fiat_shamir(std::string domain);
  static Session scripted(std::vector<Fr> challenges);

  void set_tamper(Tamper t) { tamper_ = std::move(t); }
  void statement(std::string label, Bytes data);
  Bytes send(std::string label, Bytes data);
  Fr challenge(std::string label);

  ChallengeMode mode() const { return mode_; }
  const Transcript& transcript() const { return transcript_; }
  const std::string& domain() const { return domain_; }

 private:
  explicit Session(ChallengeMode m);
  void record(Role role, std::string label, Bytes data);

  ChallengeMode mode_;
  std::optional<Rng> rng_;
  std::string domain_;
  std::optional<FsChain> chain_;
  std::vector<Fr> script_;
  std::size_t script_pos_ = 0;
  Tamper tamper_;
  Transcript transcript_;
};

// Sequential reader used by the verifier side of every protocol.
class Cursor {
 public:
  explicit Cursor(const Transcript& t, std::size_t pos = 0) : t_(t), pos_(pos) {}
  // Statement entries must match what the verifier computes itself.
  void statement(std::string_view label, std::span<const std::uint8_t> expected);
  const Bytes& prover(std::string_view label);
  Fr challenge(std::string_view label);
  bool next_is(Role role, std::string_view label) const;
  bool done() const { return pos_ == t_.size(); }
  std::size_t pos() const { return pos_; }

 private:
  const Entry& take(Role role, std::string_view label);
  const Transcript& t_;
  std::size_t pos_;
};

struct Verdict {
  bool accepted = false;
  std::string reason;
  explicit operator bool() const { return accepted; }
  static Verdict accept() { return {true, {}}; }
  static Verdict reject(std::string why) { return {false, std::move(why)}; }
};

// Concatenated fixed-size encodings.
template <class... Ts>
Bytes pack(const Ts&... xs) {
  Writer w;
  (w.put(xs), ...);
  return w.take();
}

// Inverse of pack; trailing bytes are an error.
template <class... Ts>
void unpack(std::span<const std::uint8_t> b, Ts&... xs) {
  Reader r(b);
  ((xs = r.get<Ts>()), ...);
  r.expect_done();
}

}  // namespace vddp::sigma
