#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "dqnet/dynamics.hpp"
#include "dqnet/qstate.hpp"

namespace dqnet {

/// Smallest time t such that N independent ancilla readouts are all correct
/// with probability at least 1 - epsilon, i.e. (1 - e^{-gamma t})^N >= 1 -
/// epsilon. The closed form is nudged up by a few ulps so the inequality
/// holds in floating point.
double sufficient_time_ancilla(int clause_count, double epsilon, double gamma);

/// Time after which the evolved joint state of ANY n-qubit input is within
/// epsilon of its fixed point in trace norm: the maximum of the ancilla
/// budget at epsilon / (2 * 4^n) and (2 / gamma) * ln(4^n / epsilon).
double sufficient_time_full(int system_qubits, int clause_count, double epsilon, double gamma);

/// Trace-norm bound for one matrix element whose two strings share a sector:
/// 2 * (1 - (1 - e^{-gamma t})^k), where k counts the clauses held away from
/// their resting value. Exact for a basis-state input with k falsified
/// clauses.
double same_sector_bound(int nonresting_clause_count, double gamma, double t);

/// Trace-norm bound for a matrix element whose strings differ in m >= 1
/// clause values: e^{-gamma t m / 2} (such coherences decay to zero).
double differing_sector_bound(int differing_clause_count, double gamma, double t);

/// Bound on || evolve(net, psi, t) - fixed point ||_1 assembled from the
/// per-element bounds by the triangle inequality. Standard mode only.
double convergence_bound(const NetworkConfig& net, const PureState& psi, double t);

/// Same bound for a dense (possibly mixed) system density operator.
double convergence_bound(const NetworkConfig& net, const DenseDensity& system_rho, double t);

/// (x1 v ~x2) ^ (~x1 v x2): both clauses read 1 exactly on {00, 11}.
CnfFormula bell_formula();

/// (|00> + |11>) / sqrt(2), the state the Bell network distills.
PureState bell_target();

struct BellPrep {
  PureState state;            // post-selected on the all-ones readout
  double probability = 0.0;   // Born probability of that readout
  double distance = 0.0;      // operator-norm distance to the target projector
};

/// Evolve |++> under the Bell network for time t and post-select both
/// ancillas reading 1. probability = (1 + e^{-gamma t}) / 2, and the
/// distance decays like e^{-gamma t / 2} up to a bounded correction.
BellPrep prep_bell(double gamma, double t);

struct BellPoint {
  double t = 0.0;
  double probability = 0.0;
  double distance = 0.0;
};

std::vector<BellPoint> bell_series(double gamma, const std::vector<double>& ts);

/// The labeled state sum_x a_x |x>|c_1(x)...c_N(x)>: every clause value of
/// the formula written into its ancilla, entangled with the system.
PureState pac_target(const CnfFormula& formula, const PureState& system);

struct PacPrep {
  JointState joint;               // evolved state at time t (factored form)
  std::optional<PureState> pure;  // exact closed form when t is infinite
};

/// Drive the Pac-mode network from |+>-initialized ancillas for time t.
/// At t = infinity the joint state is exactly |pac_target><pac_target|.
PacPrep prep_pac(const CnfFormula& formula, const PureState& system, double gamma, double t);

/// Same, from a classical distribution over assignments: amplitudes sqrt(p).
PacPrep prep_pac(const CnfFormula& formula,
                 const std::vector<std::pair<BasisIndex, double>>& distribution, double gamma,
                 double t);

struct SatPrep {
  std::optional<PureState> state;  // empty when the readout has probability 0
  double probability = 0.0;        // Born probability of the all-ones readout
  long satisfying_count = 0;       // brute-force count of satisfying assignments
};

/// Evolve the uniform superposition under the CNF network and post-select
/// every ancilla reading 1. At t = infinity this yields the uniform
/// superposition over satisfying assignments with probability
/// satisfying_count / 2^n (and no state at all when unsatisfiable).
SatPrep sat_superposition(const CnfFormula& formula, double gamma, double t);

}  // namespace dqnet
