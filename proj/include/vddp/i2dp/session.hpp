#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "vddp/common/rational.hpp"
#include "vddp/i2dp/transport.hpp"
#include "vddp/randomness/laplace.hpp"
#include "vddp/sigma/transcript.hpp"
#include "vddp/algebra/curve.hpp"

// One run of the distributed proof: clients commit, coins are drawn,
// clients then servers prove, and the verifier aggregates over the
// accepted parties.
namespace vddp::i2dp {

using algebra::Fr;
using algebra::G1;

enum class Mechanism { vrr, vddlm };
const char* mechanism_name(Mechanism m);

enum class Phase : std::uint8_t { setup, commit, coin, cli_proofs, ser_proofs, aggregate, done };
const char* phase_name(Phase p);

struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Clients of a block send shares to every server of the block.
struct Block {
  std::vector<std::size_t> clients, servers;
};

enum class Deviation { invalid_data, bit_flip, noise_omit, sigma_copy, output_forge };
const char* deviation_name(Deviation d);
Deviation deviation_from_name(std::string_view name);  // ConfigError on unknown kinds

struct AdversaryAction {
  PartyRole role = PartyRole::client;
  std::size_t index = 0;
  Deviation kind = Deviation::invalid_data;
  std::size_t of = 0;  // sigma-copy source server
};

struct VddlmConfig {
  Rational t_scale{2};
  unsigned gamma = 2, nu = 4;
  randomness::Precision precision = randomness::Precision::absolute;
  std::size_t d = 1;
  int sensitivity = 1;
};

struct VrrConfig {
  unsigned K = 2;
  std::vector<Rational> probs{Rational(3, 4), Rational(1, 4)};
  unsigned log_omega = 8;
};

struct SessionConfig {
  Mechanism mechanism = Mechanism::vddlm;
  std::size_t n_cli = 3, n_ser = 2;
  std::vector<Block> topology;  // empty: one block with everyone
  VddlmConfig vddlm;
  VrrConfig vrr;
  // vddlm: one 0/1 vector per client; vrr: one class index per client.
  // Empty: drawn from the seed.
  std::vector<std::vector<std::int64_t>> data;
  std::vector<AdversaryAction> adversary;
  std::uint64_t seed = 1;
  bool live = false;  // OS entropy instead of the seed
  std::string transport = "memory";
  std::string pp_seed = "vddp-i2dp";
};

SessionConfig config_from_json(const std::string& text);
std::string config_to_json(const SessionConfig& c);
// Fills defaults and checks ranges, topology and the adversary script.
void validate(SessionConfig& c);
// Appends deviations after checking them against the mechanism.
SessionConfig inject_adversary(SessionConfig c, const std::vector<AdversaryAction>& script);

// Phase order and commit-then-coin are enforced here.
class SessionState {
 public:
  explicit SessionState(std::size_t coin_parties);
  Phase phase() const { return phase_; }
  // Only the immediate successor; entering coin needs every ψ.
  void advance(Phase next);
  void record_psi(std::size_t i, const G1& psi);
  void set_coin(std::size_t i, const Fr& coin);
  bool all_psi() const;
  const std::optional<G1>& psi(std::size_t i) const { return psi_.at(i); }
  const Fr& coin(std::size_t i) const;
  const std::vector<Phase>& history() const { return history_; }

 private:
  Phase phase_ = Phase::setup;
  std::vector<std::optional<G1>> psi_;
  std::vector<std::optional<Fr>> coin_;
  std::vector<Phase> history_{Phase::setup};
};

struct PartyVerdict {
  bool accepted = false;
  std::string reason;
  std::size_t proof_bytes = 0;
};

struct Metrics {
  double setup_ms = 0, client_ms = 0, server_ms = 0, verifier_ms = 0;
  std::map<std::string, std::size_t> phase_bytes;
  std::size_t total_bytes = 0, messages = 0;
};

struct SessionOutcome {
  Mechanism mechanism = Mechanism::vddlm;
  std::vector<Phase> phases;
  std::vector<PartyVerdict> clients, servers;
  std::vector<std::size_t> j_star, i_star;
  bool aborted = false;
  std::vector<std::int64_t> output;   // vddlm aggregate
  std::vector<std::uint64_t> counts;  // vrr observed classes over J*
  std::vector<Rational> estimate;     // vrr histogram estimate
  std::string privacy_json;
  // Simulation ground truth; the verifier never reads it.
  std::vector<std::int64_t> true_aggregate;
  std::vector<std::vector<std::int64_t>> server_noise;
  std::vector<std::uint64_t> true_histogram;
  // Verifier-side transcripts, keyed "client/j" and "server/i".
  std::map<std::string, sigma::Transcript> transcripts;
  Metrics metrics;
};

// Transport failures raise TransportError; rejections are outcomes.
SessionOutcome run_session(const SessionConfig& config);

std::string outcome_to_json(const SessionOutcome& o, int indent = 2);
// <dir>/<role>-<index>.bin (binary transcript) and .json (readable form).
void dump_transcripts(const SessionOutcome& o, const std::string& dir);

}  // namespace vddp::i2dp
