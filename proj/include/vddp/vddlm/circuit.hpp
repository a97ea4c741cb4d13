#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "vddp/algebra/poly.hpp"
#include "vddp/commit/commit.hpp"
#include "vddp/randomness/laplace.hpp"
#include "vddp/randomness/lprf.hpp"
#include "vddp/sigma/transcript.hpp"

// Arithmetization of one server's LPRF evaluation and Laplace sampling
// circuit, and the committed-circuit (vanishing-quotient) argument over
// hiding KZG column commitments.
//
// Rows: dimension j owns the block [j·L, (j+1)·L) with L = nextpow2(n_lap);
// slot s < n_lap of the block holds LPRF bit j·n_lap + s in the flat
// sample layout. Slot 0 doubles as the dimension row: ω_N^{jL} = ω_D^j,
// so a share vector committed over the size-D domain is directly the X
// column.
namespace vddp::vddlm {

using algebra::Fr;
using algebra::G1;
using commit::PublicParams;
using randomness::LaplaceParams;

struct Layout {
  unsigned n_lap = 0;
  std::size_t d = 0;
  std::size_t L = 0, D = 0, N = 0;
  unsigned log_L = 0, log_D = 0, log_N = 0;

  std::size_t row(std::size_t j, unsigned slot) const { return j * L + slot; }
  // Commitment-key degree needed by the proof (quotient is the largest).
  std::size_t required_degree() const { return 2 * N + 4; }
};
Layout make_layout(unsigned n_lap, std::size_t d);

// Witness columns. S is the constant σ′; X the aggregated share.
enum Col : unsigned { kW, kB, kS, kC, kT, kU, kX, kNumCols };
// Public columns. Y holds the published output share.
enum Pub : unsigned { kK, kSelBit, kSelInit, kSelOr, kSelAnd, kWgt, kSelCont, kSelDim, kY, kNumPub };
const char* col_name(Col c);

// The LPRF relation is proven right after the coin; the sampling circuit
// and output relation after the output share is published.
enum class Part : std::uint8_t { lprf = 0, lap = 1 };

// Column values at a point (rot = 1 reads the next row, X·ω).
struct Env {
  virtual ~Env() = default;
  virtual Fr col(Col c, unsigned rot) const = 0;
  virtual Fr pub(Pub p) const = 0;
};

struct Constraint {
  std::string name;
  Part part;
  std::function<Fr(const Env&, const Fr& qnr)> eval;
};

struct ConstraintSystem {
  LaplaceParams params;
  Layout layout;
  algebra::EvalDomain<Fr> domain;        // size N
  algebra::EvalDomain<Fr> coset_domain;  // size 4N
  Fr coset_shift;
  Fr qnr;
  // Y is instance data and is left empty here.
  std::array<std::vector<Fr>, kNumPub> pub_values;
  std::array<std::vector<Fr>, kNumPub> pub_coeffs;
  std::array<std::vector<Fr>, kNumPub> pub_coset;
  std::vector<Constraint> constraints;
  Digest digest{};

  // Enforced (row, constraint) pairs; equals 4·d·n_lap + 2·d.
  std::size_t instance_count() const;
};

ConstraintSystem build_constraints(const LaplaceParams& params, std::size_t d);
std::size_t instance_formula(unsigned n_lap, std::size_t d);

// Columns (over the N rows) of an honest or tampered server.
using ColumnValues = std::array<std::vector<Fr>, kNumCols>;

struct CircuitWitness {
  ColumnValues cols;
  std::vector<Fr> y;                  // output share, one per dimension
  std::vector<std::int64_t> noise;    // per-dimension circuit noise
  std::vector<randomness::LapTrace> traces;
};

// Fills the columns from the LPRF output (bits plus square-root
// witnesses) and the aggregated share.
CircuitWitness assign_witness(const ConstraintSystem& cs, const Fr& s_prime, const randomness::LprfOutput& lprf,
                              std::span<const Fr> x_share);

// Y over the N rows from the output share vector.
std::vector<Fr> y_column(const ConstraintSystem& cs, std::span<const Fr> y);
// Names of constraints that fail on some row (direct evaluation on the domain).
std::vector<std::string> violated_constraints(const ConstraintSystem& cs, const ColumnValues& cols,
                                              std::span<const Fr> y);

// ---- committed-circuit argument ----

// Prover-side column: coefficients and hiding randomness.
struct ColumnPoly {
  std::vector<Fr> F, R;
};
// Interpolates values over the domain and adds a blinding multiple of the
// vanishing polynomial (the column is opened at most at two points).
ColumnPoly mask_column(const ConstraintSystem& cs, std::span<const Fr> values, Rng& rng);

std::vector<Col> part_columns(Part p);
// Columns read at X·ω.
std::vector<Col> part_rotated(Part p);
// The column never opened by itself; its opening is folded into the
// quotient opening (it carries the LPRF seed, resp. the data share).
Col part_linearized(Part p);

struct CircuitStmt {
  Part part = Part::lprf;
  // Commitments fixed outside this proof (lap: B and X).
  std::array<std::optional<G1>, kNumCols> given;
  std::vector<Fr> y;  // lap only
};

struct CircuitView {
  std::array<G1, kNumCols> coms;  // given or fresh
  Fr eta;
  G1 com_q;
  Fr u;
  std::vector<Fr> eval_u, rho_u;    // part_columns minus the linearized one
  std::vector<Fr> eval_w, rho_w;    // part_rotated at ω·u
  Fr rho_lin;
  Fr nu;
  G1 gamma_u, gamma_w;
};

using ColumnPolys = std::array<ColumnPoly, kNumCols>;

void prove_circuit(sigma::Session& s, const ConstraintSystem& cs, const PublicParams& pp, const CircuitStmt& st,
                   const ColumnPolys& cols, Rng& rng);
CircuitView read_circuit(sigma::Cursor& c, const ConstraintSystem& cs, const CircuitStmt& st);
sigma::Verdict verify_circuit(const ConstraintSystem& cs, const PublicParams& pp, const CircuitStmt& st,
                              const CircuitView& v);
// Uses the setup trapdoor to open the fixed commitments; pp must retain it.
CircuitView simulate_circuit(const ConstraintSystem& cs, const PublicParams& pp, const CircuitStmt& st, Rng& rng);
void write_circuit(sigma::Transcript& t, const ConstraintSystem& cs, const CircuitStmt& st, const CircuitView& v);

}  // namespace vddp::vddlm
