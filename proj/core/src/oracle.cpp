#include "dqnet/oracle.hpp"

#include <cmath>

#include "dqnet/errors.hpp"

namespace dqnet {

namespace {

void check_oracle_capacity(const NetworkConfig& net) {
  const int total = net.formula.variable_count + net.formula.clause_count();
  if (total > kMaxOracleQubits)
    throw CapacityError("oracle: " + std::to_string(total) + " total qubits exceeds the cap of " +
                        std::to_string(kMaxOracleQubits));
}

struct Generator {
  std::vector<JumpOperator> jumps;
  Eigen::MatrixXcd damping;  // (dsum_i + dsum_j) / 2, premultiplied by nothing
  double gamma = 0.0;

  DenseDensity apply(const DenseDensity& rho) const {
    DenseDensity out = DenseDensity::Zero(rho.rows(), rho.cols());
    for (const JumpOperator& jump : jumps)
      for (const auto& [r1, c1] : jump.entries)
        for (const auto& [r2, c2] : jump.entries) out(r1, r2) += rho(c1, c2);
    out -= damping.cwiseProduct(rho);
    out *= gamma;
    return out;
  }
};

Generator make_generator(const NetworkConfig& net) {
  Generator gen;
  gen.jumps = build_jump_operators(net);
  gen.gamma = net.gamma;
  const Eigen::Index dim =
      Eigen::Index{1} << (net.formula.variable_count + net.formula.clause_count());
  Eigen::VectorXd dsum = Eigen::VectorXd::Zero(dim);
  for (const JumpOperator& jump : gen.jumps)
    for (const auto& [row, col] : jump.entries) {
      (void)row;
      dsum(col) += 1.0;  // L^+L is diagonal: one per used column
    }
  Eigen::MatrixXd half = 0.5 * (dsum.replicate(1, dim) + dsum.transpose().replicate(dim, 1));
  gen.damping = half.cast<Complex>();
  return gen;
}

}  // namespace

std::vector<JumpOperator> build_jump_operators(const NetworkConfig& net) {
  validate_network(net);
  check_oracle_capacity(net);
  const int n = net.formula.variable_count;
  const int N = net.formula.clause_count();
  const std::vector<ClauseEval> compiled = compile_formula(net.formula);
  const bool rest = resting_value(net.formula.kind);
  const std::uint32_t dim = 1u << (n + N);

  std::vector<JumpOperator> jumps(static_cast<std::size_t>(N));
  for (int i = 0; i < N; ++i) {
    JumpOperator& jump = jumps[static_cast<std::size_t>(i)];
    jump.total_qubits = n + N;
    const std::uint32_t anc_mask = 1u << (N - 1 - i);
    for (std::uint32_t col = 0; col < dim; ++col) {
      const BasisIndex x = col >> N;
      const bool c = compiled[static_cast<std::size_t>(i)].eval(x);
      const bool bit = (col & anc_mask) != 0;
      if (net.mode == Mode::Standard) {
        // Triggered when the clause value differs from the resting readout;
        // the jump lowers/raises the ancilla out of its resting state.
        if (c != rest && bit == rest) jump.entries.emplace_back(col ^ anc_mask, col);
      } else {
        // Pac: drive the ancilla toward the clause value from either side.
        if (bit != c) jump.entries.emplace_back(col ^ anc_mask, col);
      }
    }
  }
  return jumps;
}

DenseDensity apply_lindbladian(const NetworkConfig& net, const DenseDensity& rho_full) {
  const Generator gen = make_generator(net);
  const Eigen::Index dim =
      Eigen::Index{1} << (net.formula.variable_count + net.formula.clause_count());
  if (rho_full.rows() != dim || rho_full.cols() != dim)
    throw std::invalid_argument("apply_lindbladian: density dimension != 2^(n+N)");
  return gen.apply(rho_full);
}

DenseDensity dense_initial_state(const NetworkConfig& net, const PureState& psi) {
  validate_network(net);
  check_oracle_capacity(net);
  if (psi.qubits() != net.formula.variable_count)
    throw std::invalid_argument("dense_initial_state: state qubit count != variable count");
  const int N = net.formula.clause_count();
  const Eigen::Index block = Eigen::Index{1} << N;

  Eigen::VectorXcd anc;
  if (net.mode == Mode::Standard) {
    anc = Eigen::VectorXcd::Zero(block);
    const bool rest = resting_value(net.formula.kind);
    anc(rest ? block - 1 : 0) = 1.0;  // |r r ... r>
  } else {
    anc = Eigen::VectorXcd::Constant(block, std::pow(0.5, 0.5 * N));  // |+>^N
  }

  Eigen::VectorXcd full = Eigen::VectorXcd::Zero((Eigen::Index{1} << psi.qubits()) * block);
  for (const auto& [x, amp] : psi.amplitudes())
    for (Eigen::Index a = 0; a < block; ++a) full(static_cast<Eigen::Index>(x) * block + a) = amp * anc(a);
  return full * full.adjoint();
}

DenseDensity integrate_master_equation(const NetworkConfig& net, DenseDensity rho0, double t,
                                       double dt) {
  std::vector<DenseDensity> snaps = integrate_with_snapshots(net, std::move(rho0), {t}, dt);
  return std::move(snaps.front());
}

std::vector<DenseDensity> integrate_with_snapshots(const NetworkConfig& net, DenseDensity rho0,
                                                   const std::vector<double>& times, double dt) {
  validate_network(net);
  check_oracle_capacity(net);
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!(times[i] >= 0.0) || std::isinf(times[i]))
      throw std::invalid_argument("integrate: times must be finite and >= 0");
    if (i > 0 && times[i] < times[i - 1])
      throw std::invalid_argument("integrate: snapshot times must be ascending");
  }
  if (dt <= 0.0) dt = 0.005 / net.gamma;

  const Eigen::Index dim =
      Eigen::Index{1} << (net.formula.variable_count + net.formula.clause_count());
  if (rho0.rows() != dim || rho0.cols() != dim)
    throw std::invalid_argument("integrate: density dimension != 2^(n+N)");

  const Generator gen = make_generator(net);
  std::vector<DenseDensity> snapshots;
  snapshots.reserve(times.size());

  DenseDensity rho = std::move(rho0);
  double now = 0.0;
  long step_count = 0;
  for (double target : times) {
    while (now < target) {
      const double h = std::min(dt, target - now);
      const DenseDensity k1 = gen.apply(rho);
      const DenseDensity k2 = gen.apply(rho + (0.5 * h) * k1);
      const DenseDensity k3 = gen.apply(rho + (0.5 * h) * k2);
      const DenseDensity k4 = gen.apply(rho + h * k3);
      rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      rho = 0.5 * (rho + rho.adjoint().eval());  // scrub rounding skew
      now += h;
      ++step_count;
      const double drift = std::abs(rho.trace().real() - 1.0);
      if (drift > 1e-8)
        throw IntegrationError("integrate: trace drift " + std::to_string(drift) + " at t=" +
                               std::to_string(now) + " (step " + std::to_string(step_count) +
                               ", dt=" + std::to_string(dt) + ")");
    }
    snapshots.push_back(rho);
  }
  return snapshots;
}

}  // namespace dqnet
