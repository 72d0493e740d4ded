#include "dqnet/dynamics.hpp"

#include <cmath>
#include <set>

#include "dqnet/errors.hpp"

namespace dqnet {

namespace {

void check_time(double t) {
  if (!(t >= 0.0)) throw std::invalid_argument("time must be >= 0 (or infinity)");
}

// e^{-gamma t / 2}; exactly 0 at t = infinity.
double half_decay(double gamma, double t) {
  if (std::isinf(t)) return 0.0;
  return std::exp(-0.5 * gamma * t);
}

}  // namespace

void validate_network(const NetworkConfig& net) {
  const CnfFormula& f = net.formula;
  if (f.variable_count < 1 || f.variable_count > 24)
    throw CapacityError("network: variable count outside [1, 24]");
  if (f.clause_count() < 1)
    throw std::invalid_argument("network: formula has no clauses");
  if (f.clause_count() > 32)
    throw CapacityError("network: more than 32 clauses");
  if (!(net.gamma > 0.0) || std::isinf(net.gamma))
    throw std::invalid_argument("network: gamma must be positive and finite");
  for (std::size_t i = 0; i < f.clauses.size(); ++i) {
    const Clause& c = f.clauses[i];
    if (c.literals.empty() || c.literals.size() > 3)
      throw std::invalid_argument("network: clause " + std::to_string(i + 1) +
                                  " must have 1..3 literals (run to_three_cnf first)");
    std::set<int> vars;
    for (const Literal& lit : c.literals) {
      if (lit.var < 1 || lit.var > f.variable_count)
        throw std::invalid_argument("network: clause " + std::to_string(i + 1) +
                                    " references variable outside [1, n]");
      if (!vars.insert(lit.var).second)
        throw std::invalid_argument("network: clause " + std::to_string(i + 1) +
                                    " repeats a variable (normalize first)");
    }
  }
}

AncillaFactor clause_factor_standard(ClauseCase c, double gamma, double t, bool rest) {
  check_time(t);
  const int r = rest ? 1 : 0;
  const int f = 1 - r;  // the value the ancilla is driven to when triggered
  AncillaFactor out = AncillaFactor::Zero();
  if (c.cx == c.cy) {
    if (c.cx == rest) {
      out(r, r) = 1.0;  // inert case: exactly the resting state at every t
      return out;
    }
    const double u = half_decay(gamma, t);
    const double survive = u * u;  // e^{-gamma t}
    out(r, r) = survive;
    out(f, f) = 1.0 - survive;
    return out;
  }
  out(r, r) = half_decay(gamma, t);
  return out;
}

AncillaFactor clause_channel_standard(ClauseCase c, double gamma, double t,
                                      const AncillaFactor& in, bool rest) {
  check_time(t);
  const int r = rest ? 1 : 0;
  const int f = 1 - r;
  const bool tx = (c.cx != rest);  // left jump triggered
  const bool ty = (c.cy != rest);  // right jump triggered
  AncillaFactor out = in;
  const double u = half_decay(gamma, t);
  if (tx && ty) {
    // amplitude damping |r> -> |f>
    out(f, f) = in(f, f) + (1.0 - u * u) * in(r, r);
    out(r, r) = u * u * in(r, r);
    out(r, f) = u * in(r, f);
    out(f, r) = u * in(f, r);
  } else if (tx) {
    out(r, 0) = u * in(r, 0);
    out(r, 1) = u * in(r, 1);
  } else if (ty) {
    out(0, r) = u * in(0, r);
    out(1, r) = u * in(1, r);
  }
  return out;
}

AncillaFactor clause_channel_pac(ClauseCase c, double gamma, double t, const AncillaFactor& in) {
  check_time(t);
  const int a = c.cx ? 1 : 0;
  const int b = c.cy ? 1 : 0;
  const int na = 1 - a, nb = 1 - b;
  const double u = half_decay(gamma, t);
  AncillaFactor out = AncillaFactor::Zero();
  out(a, b) = in(a, b) + (1.0 - u * u) * in(na, nb);
  out(a, nb) += u * in(a, nb);
  out(na, b) += u * in(na, b);
  out(na, nb) += u * u * in(na, nb);
  return out;
}

AncillaFactor pac_initial_factor() {
  AncillaFactor f;
  f << 0.5, 0.5, 0.5, 0.5;
  return f;
}

std::array<AncillaFactor, 4> case_factor_table(const NetworkConfig& net, double t) {
  std::array<AncillaFactor, 4> table;
  const bool rest = resting_value(net.formula.kind);
  for (int cx = 0; cx < 2; ++cx)
    for (int cy = 0; cy < 2; ++cy) {
      const ClauseCase c{cx != 0, cy != 0};
      table[static_cast<std::size_t>((cx << 1) | cy)] =
          net.mode == Mode::Standard
              ? clause_factor_standard(c, net.gamma, t, rest)
              : clause_channel_pac(c, net.gamma, t, pac_initial_factor());
    }
  return table;
}

namespace {

std::vector<AncillaFactor> factors_for_pair(const std::array<AncillaFactor, 4>& table,
                                            std::uint32_t lx, std::uint32_t ly, int N) {
  std::vector<AncillaFactor> factors;
  factors.reserve(static_cast<std::size_t>(N));
  for (int i = 0; i < N; ++i) {
    const int cx = (lx >> (N - 1 - i)) & 1u;
    const int cy = (ly >> (N - 1 - i)) & 1u;
    factors.push_back(table[static_cast<std::size_t>((cx << 1) | cy)]);
  }
  return factors;
}

}  // namespace

JointState evolve(const NetworkConfig& net, const PureState& psi, double t) {
  validate_network(net);
  check_time(t);
  if (psi.qubits() != net.formula.variable_count)
    throw std::invalid_argument("evolve: state qubit count != formula variable count");
  const std::size_t s = psi.support_size();
  if (s * s > (std::size_t{1} << 20))
    throw CapacityError("evolve: support^2 exceeds the factored-term cap; "
                        "use the pure-state post-selection path instead");

  const int N = net.formula.clause_count();
  const std::vector<ClauseEval> compiled = compile_formula(net.formula);
  const std::array<AncillaFactor, 4> table = case_factor_table(net, t);

  std::vector<std::uint32_t> labels;
  labels.reserve(s);
  for (const auto& [x, amp] : psi.amplitudes()) {
    (void)amp;
    labels.push_back(eval_sector_bits(compiled, x));
  }

  JointState joint(psi.qubits(), N);
  const auto& amps = psi.amplitudes();
  for (std::size_t i = 0; i < amps.size(); ++i)
    for (std::size_t j = 0; j < amps.size(); ++j) {
      const Complex coeff = amps[i].second * std::conj(amps[j].second);
      if (std::abs(coeff) < kPruneTol) continue;
      joint.add_term(amps[i].first, amps[j].first, coeff,
                     factors_for_pair(table, labels[i], labels[j], N));
    }
  return joint;
}

JointState evolve_density(const NetworkConfig& net, const DenseDensity& system_rho, double t) {
  validate_network(net);
  check_time(t);
  const int n = net.formula.variable_count;
  if (n > kMaxDenseQubits)
    throw CapacityError("evolve_density: system exceeds the dense cap");
  const Eigen::Index dim = Eigen::Index{1} << n;
  if (system_rho.rows() != dim || system_rho.cols() != dim)
    throw std::invalid_argument("evolve_density: density dimension != 2^n");
  const double scale = std::max(1.0, system_rho.cwiseAbs().maxCoeff());
  if ((system_rho - system_rho.adjoint().eval()).cwiseAbs().maxCoeff() > kHermTol * scale)
    throw std::invalid_argument("evolve_density: density is not Hermitian");
  if (std::abs(system_rho.trace().real() - 1.0) > kHermTol ||
      std::abs(system_rho.trace().imag()) > kHermTol)
    throw std::invalid_argument("evolve_density: density trace is not 1");

  const int N = net.formula.clause_count();
  const std::vector<ClauseEval> compiled = compile_formula(net.formula);
  const std::array<AncillaFactor, 4> table = case_factor_table(net, t);

  std::vector<std::uint32_t> labels(static_cast<std::size_t>(dim));
  for (Eigen::Index x = 0; x < dim; ++x)
    labels[static_cast<std::size_t>(x)] =
        eval_sector_bits(compiled, static_cast<BasisIndex>(x));

  JointState joint(n, N);
  for (Eigen::Index x = 0; x < dim; ++x)
    for (Eigen::Index y = 0; y < dim; ++y) {
      const Complex coeff = system_rho(x, y);
      if (std::abs(coeff) < kPruneTol) continue;
      joint.add_term(static_cast<BasisIndex>(x), static_cast<BasisIndex>(y), coeff,
                     factors_for_pair(table, labels[static_cast<std::size_t>(x)],
                                      labels[static_cast<std::size_t>(y)], N));
    }
  return joint;
}

DenseDensity fixed_point_projection(const CnfFormula& formula, const DenseDensity& system_rho) {
  const int n = formula.variable_count;
  const int N = formula.clause_count();
  if (n + N > kMaxDenseQubits)
    throw CapacityError("fixed_point_projection: n + N exceeds the dense cap");
  const Eigen::Index dim = Eigen::Index{1} << n;
  if (system_rho.rows() != dim || system_rho.cols() != dim)
    throw std::invalid_argument("fixed_point_projection: density dimension != 2^n");

  const std::vector<ClauseEval> compiled = compile_formula(formula);
  const Eigen::Index block = Eigen::Index{1} << N;
  DenseDensity out = DenseDensity::Zero(dim * block, dim * block);
  for (Eigen::Index x = 0; x < dim; ++x) {
    const std::uint32_t lx = eval_sector_bits(compiled, static_cast<BasisIndex>(x));
    for (Eigen::Index y = 0; y < dim; ++y) {
      const std::uint32_t ly = eval_sector_bits(compiled, static_cast<BasisIndex>(y));
      if (lx != ly) continue;
      out(x * block + lx, y * block + ly) = system_rho(x, y);
    }
  }
  return out;
}

DenseDensity dephasing_equivalent(const CnfFormula& formula, const DenseDensity& system_rho) {
  const int n = formula.variable_count;
  if (n > kMaxDenseQubits)
    throw CapacityError("dephasing_equivalent: system exceeds the dense cap");
  const Eigen::Index dim = Eigen::Index{1} << n;
  if (system_rho.rows() != dim || system_rho.cols() != dim)
    throw std::invalid_argument("dephasing_equivalent: density dimension != 2^n");

  const std::vector<ClauseEval> compiled = compile_formula(formula);
  DenseDensity out = system_rho;
  for (Eigen::Index x = 0; x < dim; ++x) {
    const std::uint32_t lx = eval_sector_bits(compiled, static_cast<BasisIndex>(x));
    for (Eigen::Index y = 0; y < dim; ++y) {
      const std::uint32_t ly = eval_sector_bits(compiled, static_cast<BasisIndex>(y));
      if (lx != ly) out(x, y) = Complex{};
    }
  }
  return out;
}

std::pair<PureState, double> post_select_pure(const NetworkConfig& net, const PureState& psi,
                                              SectorLabel outcome, double t) {
  validate_network(net);
  check_time(t);
  if (net.mode != Mode::Standard)
    throw std::invalid_argument("post_select_pure: standard mode only");
  if (psi.qubits() != net.formula.variable_count)
    throw std::invalid_argument("post_select_pure: state qubit count != formula variable count");
  const int N = net.formula.clause_count();
  if (outcome.size != N)
    throw std::invalid_argument("post_select_pure: outcome width != clause count");

  const std::vector<ClauseEval> compiled = compile_formula(net.formula);
  const std::array<AncillaFactor, 4> table = case_factor_table(net, t);
  // Per-(clause value, readout) amplitude weight; the conditioned block of a
  // pure input factorizes through these.
  double v[2][2];
  for (int c = 0; c < 2; ++c) {
    const AncillaFactor& f = table[static_cast<std::size_t>((c << 1) | c)];
    v[c][0] = std::sqrt(std::max(0.0, f(0, 0).real()));
    v[c][1] = std::sqrt(std::max(0.0, f(1, 1).real()));
  }

  std::vector<std::pair<BasisIndex, Complex>> amps;
  double prob = 0.0;
  for (const auto& [x, amp] : psi.amplitudes()) {
    const std::uint32_t lx = eval_sector_bits(compiled, x);
    double w = 1.0;
    for (int i = 0; i < N && w != 0.0; ++i) {
      const int c = (lx >> (N - 1 - i)) & 1u;
      const int o = outcome.bit(i + 1) ? 1 : 0;
      w *= v[c][o];
    }
    if (w == 0.0) continue;
    const Complex weighted = amp * w;
    prob += std::norm(weighted);
    amps.emplace_back(x, weighted);
  }
  if (amps.empty() || prob <= 0.0) return {PureState{}, 0.0};
  PureState out(psi.qubits(), std::move(amps));
  out.normalize();
  return {std::move(out), prob};
}

double ancilla_one_probability(const NetworkConfig& net, bool clause_value, double t) {
  const int c = clause_value ? 1 : 0;
  const std::array<AncillaFactor, 4> table = case_factor_table(net, t);
  return table[static_cast<std::size_t>((c << 1) | c)](1, 1).real();
}

}  // namespace dqnet
