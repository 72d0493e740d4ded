#include "dqnet/classify.hpp"

#include <cmath>

#include "dqnet/errors.hpp"

namespace dqnet {

namespace {

std::vector<double> c_tilde_from_weights(const std::map<SectorLabel, double>& weights, int N) {
  std::vector<double> c(static_cast<std::size_t>(N), 0.0);
  for (const auto& [label, w] : weights)
    for (int i = 1; i <= N; ++i)
      if (label.bit(i)) c[static_cast<std::size_t>(i - 1)] += w;
  return c;
}

double product(const std::vector<double>& v) {
  double p = 1.0;
  for (double x : v) p *= x;
  return p;
}

}  // namespace

ClassificationResult classify_exact(const CnfFormula& formula, const PureState& psi) {
  if (psi.qubits() != formula.variable_count)
    throw std::invalid_argument("classify_exact: state qubit count != variable count");
  const int N = formula.clause_count();
  const std::vector<ClauseEval> compiled = compile_formula(formula);

  ClassificationResult out;
  for (const auto& [x, amp] : psi.amplitudes()) {
    const SectorLabel label{eval_sector_bits(compiled, x), N};
    out.sector_weights[label] += std::norm(amp);
  }
  out.c_tilde = c_tilde_from_weights(out.sector_weights, N);
  const SectorLabel ones{N >= 32 ? ~0u : (1u << N) - 1u, N};
  if (auto it = out.sector_weights.find(ones); it != out.sector_weights.end())
    out.c_hat_1 = it->second;
  out.c_hat_2 = product(out.c_tilde);
  return out;
}

ClassificationResult classify_sampled(const NetworkConfig& net, const PureState& psi, double t,
                                      int shots, std::uint64_t seed) {
  validate_network(net);
  if (psi.qubits() != net.formula.variable_count)
    throw std::invalid_argument("classify_sampled: state qubit count != variable count");
  if (shots < 1) throw std::invalid_argument("classify_sampled: shots must be >= 1");

  const int N = net.formula.clause_count();
  const std::vector<ClauseEval> compiled = compile_formula(net.formula);
  const std::array<AncillaFactor, 4> table = case_factor_table(net, t);
  const double p_one[2] = {table[0](1, 1).real(), table[3](1, 1).real()};

  // Support CDF and per-string sector labels.
  const auto& amps = psi.amplitudes();
  std::vector<double> cdf(amps.size());
  std::vector<std::uint32_t> labels(amps.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < amps.size(); ++i) {
    acc += std::norm(amps[i].second);
    cdf[i] = acc;
    labels[i] = eval_sector_bits(compiled, amps[i].first);
  }

  std::map<SectorLabel, long> counts;
  std::vector<long> ones_per_clause(static_cast<std::size_t>(N), 0);
  for (int shot = 0; shot < shots; ++shot) {
    Rng rng(seed + static_cast<std::uint64_t>(shot));
    const double pick = rng.uniform() * acc;
    std::size_t lo = 0, hi = amps.size() - 1;
    while (lo < hi) {
      const std::size_t mid = (lo + hi) / 2;
      if (cdf[mid] < pick)
        lo = mid + 1;
      else
        hi = mid;
    }
    const std::uint32_t lx = labels[lo];
    std::uint32_t outcome = 0;
    for (int i = 0; i < N; ++i) {
      const int c = (lx >> (N - 1 - i)) & 1u;
      if (rng.uniform() < p_one[c]) {
        outcome |= 1u << (N - 1 - i);
        ++ones_per_clause[static_cast<std::size_t>(i)];
      }
    }
    ++counts[SectorLabel{outcome, N}];
  }

  ClassificationResult out;
  out.shots = shots;
  for (const auto& [label, cnt] : counts)
    out.sector_weights[label] = static_cast<double>(cnt) / shots;
  out.c_tilde.resize(static_cast<std::size_t>(N));
  out.c_tilde_stderr.resize(static_cast<std::size_t>(N));
  for (int i = 0; i < N; ++i) {
    const double p = static_cast<double>(ones_per_clause[static_cast<std::size_t>(i)]) / shots;
    out.c_tilde[static_cast<std::size_t>(i)] = p;
    out.c_tilde_stderr[static_cast<std::size_t>(i)] = std::sqrt(p * (1.0 - p) / shots);
  }
  const SectorLabel ones{N >= 32 ? ~0u : (1u << N) - 1u, N};
  if (auto it = out.sector_weights.find(ones); it != out.sector_weights.end())
    out.c_hat_1 = it->second;
  out.c_hat_1_stderr = std::sqrt(out.c_hat_1 * (1.0 - out.c_hat_1) / shots);
  out.c_hat_2 = product(out.c_tilde);
  return out;
}

bool is_dfs_member(const CnfFormula& formula, const PureState& psi, const SectorLabel& label) {
  if (psi.qubits() != formula.variable_count)
    throw std::invalid_argument("is_dfs_member: state qubit count != variable count");
  if (label.size != formula.clause_count())
    throw std::invalid_argument("is_dfs_member: label width != clause count");
  const std::vector<ClauseEval> compiled = compile_formula(formula);
  for (const auto& [x, amp] : psi.amplitudes()) {
    (void)amp;
    if (eval_sector_bits(compiled, x) != label.bits) return false;
  }
  return true;
}

std::optional<SectorLabel> common_sector(const CnfFormula& formula, const PureState& psi) {
  const std::vector<ClauseEval> compiled = compile_formula(formula);
  std::optional<std::uint32_t> bits;
  for (const auto& [x, amp] : psi.amplitudes()) {
    (void)amp;
    const std::uint32_t lx = eval_sector_bits(compiled, x);
    if (!bits)
      bits = lx;
    else if (*bits != lx)
      return std::nullopt;
  }
  if (!bits) return std::nullopt;
  return SectorLabel{*bits, formula.clause_count()};
}

PassiveReadout classify_passive(const NetworkConfig& net, const PureState& psi, double t,
                                std::uint64_t seed) {
  validate_network(net);
  if (psi.qubits() != net.formula.variable_count)
    throw std::invalid_argument("classify_passive: state qubit count != variable count");

  const std::optional<SectorLabel> sector = common_sector(net.formula, psi);
  if (!sector)
    throw PromiseViolation(
        "classify_passive: state straddles two or more sectors; the readout would disturb it");

  const int N = net.formula.clause_count();
  const std::array<AncillaFactor, 4> table = case_factor_table(net, t);
  const double p_one[2] = {table[0](1, 1).real(), table[3](1, 1).real()};

  Rng rng(seed);
  std::uint32_t outcome = 0;
  for (int i = 1; i <= N; ++i) {
    const int c = sector->bit(i) ? 1 : 0;
    if (rng.uniform() < p_one[c]) outcome |= 1u << (N - i);
  }

  // Every term of the evolved state shares identical ancilla factors, so
  // conditioning multiplies the system block by a scalar: psi is retained.
  PassiveReadout out;
  out.measured = SectorLabel{outcome, N};
  out.post_state = psi;
  out.input_fidelity = fidelity(psi, out.post_state);
  return out;
}

bool is_hypercube_vertex(const std::vector<double>& c_tilde, double tol) {
  for (double c : c_tilde)
    if (std::min(c, 1.0 - c) > tol) return false;
  return true;
}

}  // namespace dqnet
