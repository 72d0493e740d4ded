#include "dqnet/apps.hpp"

#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "dqnet/errors.hpp"

namespace dqnet {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_epsilon(double epsilon) {
  if (!(epsilon > 0.0) || !(epsilon < 1.0)) {
    throw std::invalid_argument("epsilon must lie in (0, 1)");
  }
}

void check_gamma(double gamma) {
  if (!(gamma > 0.0) || std::isinf(gamma)) {
    throw std::invalid_argument("gamma must be positive and finite");
  }
}

bool ancilla_budget_holds(double t, int N, double epsilon, double gamma) {
  return std::pow(-std::expm1(-gamma * t), N) >= 1.0 - epsilon;
}

// Nudge t upward until pred(t) holds. Near the analytic solution the
// predicate can be flat (derivative on the order of epsilon), so rounding
// in its evaluation may demand corrections far beyond a few ulps; grow the
// step geometrically so the first passing t overshoots by at most one
// doubling of whatever correction was actually needed.
template <typename Pred>
double nudge_up(double t, Pred pred) {
  double step = std::max(std::numeric_limits<double>::min(), t * 1e-16);
  for (int i = 0; i < 256; ++i) {
    if (pred(t)) return t;
    t += step;
    step *= 2.0;
  }
  throw std::logic_error("time budget did not verify after nudging");
}

}  // namespace

double sufficient_time_ancilla(int clause_count, double epsilon, double gamma) {
  if (clause_count < 1) throw std::invalid_argument("clause count must be >= 1");
  check_epsilon(epsilon);
  check_gamma(gamma);
  // Solve (1 - e^{-gamma t})^N = 1 - epsilon for t, staying accurate when
  // epsilon / N is tiny: 1 - (1-eps)^(1/N) = -expm1(log1p(-eps)/N).
  const double t = -std::log(-std::expm1(std::log1p(-epsilon) / clause_count)) / gamma;
  return nudge_up(t, [&](double tt) {
    return ancilla_budget_holds(tt, clause_count, epsilon, gamma);
  });
}

double sufficient_time_full(int system_qubits, int clause_count, double epsilon, double gamma) {
  if (system_qubits < 1 || system_qubits > 24) {
    throw std::invalid_argument("system qubit count outside [1, 24]");
  }
  if (clause_count < 1) throw std::invalid_argument("clause count must be >= 1");
  check_epsilon(epsilon);
  check_gamma(gamma);
  const double four_n = std::exp2(2.0 * system_qubits);  // exact for n <= 24
  const double eps_anc = epsilon / (2.0 * four_n);
  const double t1 = sufficient_time_ancilla(clause_count, eps_anc, gamma);
  const double t2 = (2.0 / gamma) * std::log(four_n / epsilon);
  const double t = std::max(t1, t2);
  return nudge_up(t, [&](double tt) {
    return ancilla_budget_holds(tt, clause_count, eps_anc, gamma) &&
           four_n * std::exp(-0.5 * gamma * tt) <= epsilon;
  });
}

double same_sector_bound(int nonresting_clause_count, double gamma, double t) {
  if (nonresting_clause_count < 0) {
    throw std::invalid_argument("same_sector_bound: negative clause count");
  }
  check_gamma(gamma);
  if (!(t >= 0.0)) throw std::invalid_argument("same_sector_bound: time must be >= 0");
  const double q = -std::expm1(-gamma * t);  // 1 - e^{-gamma t}; exactly 1 at t = inf
  return 2.0 * (1.0 - std::pow(q, nonresting_clause_count));
}

double differing_sector_bound(int differing_clause_count, double gamma, double t) {
  if (differing_clause_count < 1) {
    throw std::invalid_argument("differing_sector_bound: clause count must be >= 1");
  }
  check_gamma(gamma);
  if (!(t >= 0.0)) throw std::invalid_argument("differing_sector_bound: time must be >= 0");
  return std::exp(-0.5 * gamma * t * differing_clause_count);
}

namespace {

// Bound for a single matrix element |x><y| with sector labels (lx, ly).
double element_bound(std::uint32_t lx, std::uint32_t ly, int N, bool rest, double gamma,
                     double t) {
  const std::uint32_t full = N >= 32 ? ~0u : (1u << N) - 1u;
  const int m = std::popcount(lx ^ ly);
  if (m > 0) return differing_sector_bound(m, gamma, t);
  // Clauses away from rest on this pair: value 0 for CNF, 1 for DNF.
  const int k = rest ? N - std::popcount(lx & full) : std::popcount(lx & full);
  return same_sector_bound(k, gamma, t);
}

void check_bound_args(const NetworkConfig& net) {
  validate_network(net);
  if (net.mode != Mode::Standard) {
    throw std::invalid_argument("convergence_bound: standard mode only");
  }
}

}  // namespace

double convergence_bound(const NetworkConfig& net, const PureState& psi, double t) {
  check_bound_args(net);
  if (psi.qubits() != net.formula.variable_count) {
    throw std::invalid_argument("convergence_bound: state qubit count != variable count");
  }
  const int N = net.formula.clause_count();
  const bool rest = resting_value(net.formula.kind);
  const std::vector<ClauseEval> compiled = compile_formula(net.formula);

  const auto& amps = psi.amplitudes();
  std::vector<std::uint32_t> labels;
  labels.reserve(amps.size());
  for (const auto& [x, amp] : amps) {
    (void)amp;
    labels.push_back(eval_sector_bits(compiled, x));
  }

  double total = 0.0;
  for (std::size_t i = 0; i < amps.size(); ++i) {
    for (std::size_t j = 0; j < amps.size(); ++j) {
      const double weight = std::abs(amps[i].second) * std::abs(amps[j].second);
      if (weight == 0.0) continue;
      total += weight * element_bound(labels[i], labels[j], N, rest, net.gamma, t);
    }
  }
  return total;
}

double convergence_bound(const NetworkConfig& net, const DenseDensity& system_rho, double t) {
  check_bound_args(net);
  const int n = net.formula.variable_count;
  if (n > kMaxDenseQubits) {
    throw CapacityError("convergence_bound: system exceeds the dense cap");
  }
  const Eigen::Index dim = Eigen::Index{1} << n;
  if (system_rho.rows() != dim || system_rho.cols() != dim) {
    throw std::invalid_argument("convergence_bound: density dimension != 2^n");
  }
  const int N = net.formula.clause_count();
  const bool rest = resting_value(net.formula.kind);
  const std::vector<ClauseEval> compiled = compile_formula(net.formula);

  std::vector<std::uint32_t> labels(static_cast<std::size_t>(dim));
  for (Eigen::Index x = 0; x < dim; ++x) {
    labels[static_cast<std::size_t>(x)] = eval_sector_bits(compiled, static_cast<BasisIndex>(x));
  }

  double total = 0.0;
  for (Eigen::Index x = 0; x < dim; ++x) {
    for (Eigen::Index y = 0; y < dim; ++y) {
      const double weight = std::abs(system_rho(x, y));
      if (weight == 0.0) continue;
      total += weight * element_bound(labels[static_cast<std::size_t>(x)],
                                      labels[static_cast<std::size_t>(y)], N, rest, net.gamma, t);
    }
  }
  return total;
}

CnfFormula bell_formula() {
  CnfFormula f;
  f.variable_count = 2;
  f.kind = FormulaKind::Cnf;
  f.clauses = {Clause{{Literal{1, false}, Literal{2, true}}},
               Clause{{Literal{1, true}, Literal{2, false}}}};
  return f;
}

PureState bell_target() {
  const double a = 1.0 / std::sqrt(2.0);
  return PureState(2, {{0u, a}, {3u, a}});
}

BellPrep prep_bell(double gamma, double t) {
  NetworkConfig net{bell_formula(), gamma, Mode::Standard};
  const PureState plus = PureState::uniform_superposition(2);
  auto [state, probability] = post_select_pure(net, plus, SectorLabel{0b11u, 2}, t);
  BellPrep out;
  out.state = std::move(state);
  out.probability = probability;
  out.distance =
      operator_norm_distance(dense_from_pure(out.state), dense_from_pure(bell_target()));
  return out;
}

std::vector<BellPoint> bell_series(double gamma, const std::vector<double>& ts) {
  std::vector<BellPoint> out;
  out.reserve(ts.size());
  for (double t : ts) {
    const BellPrep prep = prep_bell(gamma, t);
    out.push_back(BellPoint{t, prep.probability, prep.distance});
  }
  return out;
}

PureState pac_target(const CnfFormula& formula, const PureState& system) {
  if (system.qubits() != formula.variable_count) {
    throw std::invalid_argument("pac_target: state qubit count != variable count");
  }
  const int n = formula.variable_count;
  const int N = formula.clause_count();
  if (n + N > 24) throw CapacityError("pac_target: n + N exceeds 24 qubits");
  const std::vector<ClauseEval> compiled = compile_formula(formula);
  std::vector<std::pair<BasisIndex, Complex>> amps;
  amps.reserve(system.support_size());
  for (const auto& [x, amp] : system.amplitudes()) {
    const BasisIndex idx = (x << N) | eval_sector_bits(compiled, x);
    amps.emplace_back(idx, amp);
  }
  return PureState(n + N, std::move(amps));
}

PacPrep prep_pac(const CnfFormula& formula, const PureState& system, double gamma, double t) {
  NetworkConfig net{formula, gamma, Mode::Pac};
  validate_network(net);
  PacPrep out;
  out.joint = evolve(net, system, t);
  if (std::isinf(t)) out.pure = pac_target(formula, system);
  return out;
}

PacPrep prep_pac(const CnfFormula& formula,
                 const std::vector<std::pair<BasisIndex, double>>& distribution, double gamma,
                 double t) {
  if (distribution.empty()) {
    throw std::invalid_argument("prep_pac: empty distribution");
  }
  double total = 0.0;
  std::vector<std::pair<BasisIndex, Complex>> amps;
  amps.reserve(distribution.size());
  for (const auto& [x, p] : distribution) {
    if (!(p >= 0.0) || std::isinf(p)) {
      throw std::invalid_argument("prep_pac: probabilities must be finite and >= 0");
    }
    total += p;
    if (p > 0.0) amps.emplace_back(x, Complex{std::sqrt(p), 0.0});
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw std::invalid_argument("prep_pac: distribution does not sum to 1");
  }
  PureState system(formula.variable_count, std::move(amps));
  system.normalize();
  return prep_pac(formula, system, gamma, t);
}

SatPrep sat_superposition(const CnfFormula& formula, double gamma, double t) {
  if (formula.kind != FormulaKind::Cnf) {
    throw std::invalid_argument("sat_superposition: CNF formulas only");
  }
  NetworkConfig net{formula, gamma, Mode::Standard};
  validate_network(net);
  const int n = formula.variable_count;
  if (n > 12) throw CapacityError("sat_superposition: more than 12 variables");
  const int N = formula.clause_count();

  SatPrep out;
  const BasisIndex limit = BasisIndex{1} << n;
  for (BasisIndex x = 0; x < limit; ++x) {
    if (eval_formula(formula, Assignment{x, n})) ++out.satisfying_count;
  }

  const PureState uniform = PureState::uniform_superposition(n);
  const SectorLabel ones{N >= 32 ? ~0u : (1u << N) - 1u, N};
  auto [state, probability] = post_select_pure(net, uniform, ones, t);
  out.probability = probability;
  if (probability > 0.0) out.state = std::move(state);
  return out;
}

}  // namespace dqnet
