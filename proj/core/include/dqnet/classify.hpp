#pragma once

#include <optional>

#include "dqnet/dynamics.hpp"
#include "dqnet/formula.hpp"
#include "dqnet/qstate.hpp"

namespace dqnet {

/// Soft readout of a state against a clause network.
///  - sector_weights: ||Pi_L psi||^2 per sector label L (exact) or the
///    empirical outcome frequencies (sampled).
///  - c_tilde[i]: probability that clause i+1 reads 1.
///  - c_hat_1: weight of the all-ones readout (the "formula satisfied on
///    every branch" estimator).
///  - c_hat_2: product of the c_tilde components (independent-clause
///    estimator; differs from c_hat_1 off the hypercube vertices).
struct ClassificationResult {
  std::map<SectorLabel, double> sector_weights;
  std::vector<double> c_tilde;
  double c_hat_1 = 0.0;
  double c_hat_2 = 0.0;
  int shots = 0;                       // 0 for exact results
  std::vector<double> c_tilde_stderr;  // binomial standard errors (sampled only)
  double c_hat_1_stderr = 0.0;
};

/// Exact sector decomposition of psi under the formula's partition: weights
/// are amplitudes-squared bucketed by sector label. No dynamics involved.
ClassificationResult classify_exact(const CnfFormula& formula, const PureState& psi);

/// Simulate `shots` independent prepare-evolve-measure rounds at time t and
/// return empirical estimates. Shot k uses the derived seed (seed + k), so
/// results are deterministic and order-independent.
ClassificationResult classify_sampled(const NetworkConfig& net, const PureState& psi, double t,
                                      int shots, std::uint64_t seed);

/// True when every support string of psi evaluates to the same sector label
/// (psi lies inside one decoherence-free subspace).
bool is_dfs_member(const CnfFormula& formula, const PureState& psi, const SectorLabel& label);

/// The common sector label of psi's support, if there is one.
std::optional<SectorLabel> common_sector(const CnfFormula& formula, const PureState& psi);

struct PassiveReadout {
  SectorLabel measured;
  PureState post_state;
  double input_fidelity = 0.0;  // |<psi|post>|^2; 1 whenever the promise holds
};

/// Measure the ancillas of the evolved state under the promise that psi
/// lies inside one sector. The conditioned system state is psi itself (the
/// measurement commutes with sector members), so the state is returned
/// untouched together with the sampled readout. Throws PromiseViolation if
/// psi straddles sectors.
PassiveReadout classify_passive(const NetworkConfig& net, const PureState& psi, double t,
                                std::uint64_t seed);

/// Whether a soft readout vector is (within tol) a corner of [0,1]^N.
bool is_hypercube_vertex(const std::vector<double>& c_tilde, double tol = 1e-12);

}  // namespace dqnet
