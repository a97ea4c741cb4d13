#pragma once

#include <optional>

#include "vddp/sharing/sharing.hpp"
#include "vddp/sigma/protocols.hpp"
#include "vddp/vddlm/circuit.hpp"

// Server side of the distributed discrete Laplace mechanism: noise from
// the LPRF keyed by σ + φ, and the server proof Π_Ser.
namespace vddp::vddlm {

struct ServerState {
  Fr sigma, rho;
  G1 psi;  // g^σ h^ρ, published before φ is drawn
  std::vector<Fr> x_share, r_share;  // aggregated over accepted clients
};

ServerState make_server(const PublicParams& pp, Rng& rng);
ServerState make_server_with_sigma(const PublicParams& pp, const Fr& sigma, Rng& rng);

// LPRF index space per seed.
inline constexpr std::uint64_t kLprfBitBudget = std::uint64_t(1) << 32;
struct BitBudgetExceeded : std::length_error {
  BitBudgetExceeded() : std::length_error("LPRF bit budget exceeded") {}
};

using BitHook = std::function<void(std::vector<std::uint8_t>& bits)>;

struct ServerWork {
  Fr s_prime;
  randomness::LprfOutput lprf;
  CircuitWitness witness;  // witness.y is the output share
  std::vector<Fr> x_claimed;  // share the prover uses for the X column
};

// σ′ = σ + φ, z = LPRF(σ′) over d·n_lap indices, ⟨y⟩ = ⟨x⟩ + noise.
// The hook may rewrite z (tests only; witnesses then stop matching).
ServerWork server_compute(const ConstraintSystem& cs, const ServerState& st, const Fr& phi, const BitHook& hook = {});
ServerWork server_compute(const ServerState& st, const Fr& phi, const LaplaceParams& lp, std::size_t d,
                          const BitHook& hook = {});
// Noise only (no witnesses, fast Legendre path).
std::vector<std::int64_t> server_noise(const Fr& s_prime, const LaplaceParams& lp, std::size_t d);

// Deviations of a malicious server, applied to an honest ServerWork.
enum class SerCheat {
  none,
  lprf_bit_flip,      // one z bit flipped, trace recomputed from it
  chain_break,        // one Bernoulli chain state flipped
  sign_forgery,       // sign of the noise inverted against b_s
  magnitude_forgery,  // magnitude off by one, output consistent with it
  noise_tamper,       // output share off by one, trace untouched
  share_mismatch,     // output over a share that differs from ⟨com⟩_i
  noise_omit,         // ⟨y⟩ = ⟨x⟩
};
const char* cheat_name(SerCheat c);
SerCheat cheat_from_name(std::string_view name);
void apply_cheat(const ConstraintSystem& cs, ServerWork& w, SerCheat cheat, Rng& rng);

struct SerStmt {
  G1 psi;
  Fr phi;
  G1 share_com;  // aggregated share commitment of this server
};

struct SerView {
  CircuitView lprf;
  sigma::EqView eq;
  std::vector<Fr> y;
  CircuitView lap;
};

G1 fused_psi(const PublicParams& pp, const SerStmt& st);
CircuitStmt lprf_stmt();
CircuitStmt lap_stmt(const SerStmt& st, const G1& zeta, std::span<const Fr> y);
sigma::EqStmt seed_eq_stmt(const PublicParams& pp, const SerStmt& st, const G1& com_s);

void prove_ser(sigma::Session& s, const ConstraintSystem& cs, const PublicParams& pp, const SerStmt& st,
               const ServerState& state, const ServerWork& w, Rng& rng);
SerView read_ser(sigma::Cursor& c, const ConstraintSystem& cs, const PublicParams& pp, const SerStmt& st);
sigma::Verdict verify_ser(const ConstraintSystem& cs, const PublicParams& pp, const SerStmt& st, const SerView& v);
SerView simulate_ser(const ConstraintSystem& cs, const PublicParams& pp, const SerStmt& st, std::span<const Fr> y,
                     Rng& rng);
void write_ser(sigma::Transcript& t, const ConstraintSystem& cs, const PublicParams& pp, const SerStmt& st,
               const SerView& v);

struct SerOutcome {
  sigma::Verdict verdict;
  std::vector<Fr> y_share;
};
SerOutcome run_pi_ser(sigma::Session& s, const ConstraintSystem& cs, const PublicParams& pp, const SerStmt& st,
                      const ServerState& state, const ServerWork& w, Rng& rng);

// Signed decoding of a small field element; throws if |v| ≥ 2^62.
std::int64_t decode_signed(const Fr& v);

struct Aggregate {
  bool aborted = true;
  std::vector<Fr> y;
  std::vector<std::int64_t> decoded;
};
// Sums the output shares when every server was accepted, else aborts.
Aggregate aggregate_outputs(const std::vector<bool>& accepted, const std::vector<std::vector<Fr>>& y_shares);

}  // namespace vddp::vddlm
