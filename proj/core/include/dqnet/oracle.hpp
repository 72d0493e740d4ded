#pragma once

#include "dqnet/dynamics.hpp"
#include "dqnet/qstate.hpp"

namespace dqnet {

/// Brute-force integration cap: 2^10 dense dimension keeps the full
/// verification grid fast.
inline constexpr int kMaxOracleQubits = 10;

/// One clause's jump operator on the full register, stored as its nonzero
/// entries (every entry is 1). Standard mode: project the clause's trigger
/// pattern on the system and lower the resting ancilla. Pac mode: drive the
/// ancilla toward the clause value from either side.
struct JumpOperator {
  int total_qubits = 0;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> entries;  // (row, col)
};

std::vector<JumpOperator> build_jump_operators(const NetworkConfig& net);

/// The generator applied once: sum_i gamma (L_i rho L_i^+ - 1/2 {L_i^+ L_i, rho}).
/// rho is dense on all n + N qubits.
DenseDensity apply_lindbladian(const NetworkConfig& net, const DenseDensity& rho_full);

/// |psi><psi| (x) (ancilla blocks for this mode), dense on the full register.
DenseDensity dense_initial_state(const NetworkConfig& net, const PureState& psi);

/// Classical fixed-step RK4 for the master equation. dt <= 0 picks the
/// default 0.005 / gamma. The state is re-symmetrized every step; the trace
/// is never renormalized, and drift beyond 1e-8 aborts with diagnostics.
DenseDensity integrate_master_equation(const NetworkConfig& net, DenseDensity rho0, double t,
                                       double dt = 0.0);

/// Integrate once and capture snapshots at several times (ascending order).
std::vector<DenseDensity> integrate_with_snapshots(const NetworkConfig& net, DenseDensity rho0,
                                                   const std::vector<double>& times,
                                                   double dt = 0.0);

}  // namespace dqnet
