#pragma once

#include <array>
#include <utility>

#include "dqnet/formula.hpp"
#include "dqnet/qstate.hpp"

namespace dqnet {

/// Ancilla wiring: Standard couples each clause ancilla through a single
/// decay jump (readout mode); Pac adds the reverse pump so the ancilla is
/// driven to the clause value from any initial state.
enum class Mode { Standard, Pac };

/// A compiled clause network: one ancilla per clause, every ancilla damped
/// at rate gamma toward the truth value of its clause on the system string.
struct NetworkConfig {
  CnfFormula formula;
  double gamma = 1.0;
  Mode mode = Mode::Standard;
};

/// Throws std::invalid_argument / CapacityError when the formula is not in
/// network form (1..3 distinct-variable literals per clause, 1..32 clauses,
/// positive finite gamma).
void validate_network(const NetworkConfig& net);

/// Ancilla resting value: the readout a clause ancilla starts in.
/// CNF ancillas start at |1> and decay on falsified clauses; DNF ancillas
/// start at |0> and are pumped on satisfied clauses.
inline bool resting_value(FormulaKind kind) { return kind == FormulaKind::Cnf; }

/// Truth values of one clause on the two system strings of a matrix element
/// |x><y|: cx = C(x), cy = C(y).
struct ClauseCase {
  bool cx = false;
  bool cy = false;
};

/// Closed-form ancilla block at time t for a standard-mode clause, starting
/// from the resting state |r><r|:
///   cx == cy == r      ->  |r><r| exactly (no evolution, built symbolically)
///   cx == cy == ~r     ->  e^{-gt} |r><r| + (1 - e^{-gt}) |~r><~r|
///   cx != cy           ->  e^{-gt/2} |r><r|
/// t may be infinity, in which case the limits are used exactly.
AncillaFactor clause_factor_standard(ClauseCase c, double gamma, double t, bool rest = true);

/// The same one-clause channel applied to an arbitrary ancilla block
/// (used for semigroup checks and non-resting inputs).
AncillaFactor clause_channel_standard(ClauseCase c, double gamma, double t,
                                      const AncillaFactor& in, bool rest = true);

/// One-clause channel for Pac mode: the ancilla relaxes toward |cx><cy|
/// from any input block. With the |+><+| input and t = infinity the block
/// becomes exactly |cx><cy|.
AncillaFactor clause_channel_pac(ClauseCase c, double gamma, double t, const AncillaFactor& in);

/// |+><+|, the Pac-mode initial ancilla block.
AncillaFactor pac_initial_factor();

/// The four case blocks (index (cx<<1)|cy) for this network at time t.
std::array<AncillaFactor, 4> case_factor_table(const NetworkConfig& net, double t);

/// Exact evolution of |psi><psi| (x) (resting ancillas) for time t, in the
/// factored matrix-element representation. Cost is support^2 * N.
JointState evolve(const NetworkConfig& net, const PureState& psi, double t);

/// Same channel on a dense system density operator.
JointState evolve_density(const NetworkConfig& net, const DenseDensity& system_rho, double t);

/// The t -> infinity limit of the standard-mode channel, assembled directly
/// from the sector partition: sum_L (Pi_L rho Pi_L) (x) |L><L|.
/// Output is dense on all n + N qubits.
DenseDensity fixed_point_projection(const CnfFormula& formula, const DenseDensity& system_rho);

/// The system marginal of the fixed point: rho with every matrix element
/// between different sectors zeroed (a sector-block dephasing).
DenseDensity dephasing_equivalent(const CnfFormula& formula, const DenseDensity& system_rho);

/// Born-rule conditioning of an evolved pure input on one full ancilla
/// readout pattern, without materializing the joint state. Standard mode
/// only (where the conditioned block is always rank one). Returns the
/// normalized post-selection state and the outcome probability; the state
/// is empty (probability 0) when the pattern cannot occur.
std::pair<PureState, double> post_select_pure(const NetworkConfig& net, const PureState& psi,
                                              SectorLabel outcome, double t);

/// P(ancilla reads 1 | clause value c) at time t, from the diagonal case
/// block. Valid in both modes.
double ancilla_one_probability(const NetworkConfig& net, bool clause_value, double t);

}  // namespace dqnet
