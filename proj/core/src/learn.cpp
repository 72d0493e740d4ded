#include "dqnet/learn.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

#include "dqnet/apps.hpp"
#include "dqnet/errors.hpp"

namespace dqnet {
namespace {

void check_literal_ranges(const Conjunction& c) {
  if (c.n < 1 || c.n > 24) {
    throw std::invalid_argument("conjunction variable count out of range [1, 24]");
  }
  for (const Literal& lit : c.literals) {
    if (lit.var < 1 || lit.var > c.n) {
      throw std::invalid_argument("conjunction literal out of range");
    }
  }
}

// A proper conjunction (a learning target): each variable at most once.
void check_conjunction(const Conjunction& c) {
  check_literal_ranges(c);
  std::set<int> seen;
  for (const Literal& lit : c.literals) {
    if (!seen.insert(lit.var).second) {
      throw std::invalid_argument("conjunction mentions a variable twice");
    }
  }
}

// A hypothesis may hold both polarities of a variable (the most specific
// hypothesis starts that way), but never the same literal twice.
void check_hypothesis(const Conjunction& c) {
  check_literal_ranges(c);
  std::set<std::pair<int, bool>> seen;
  for (const Literal& lit : c.literals) {
    if (!seen.insert({lit.var, lit.negated}).second) {
      throw std::invalid_argument("hypothesis repeats a literal");
    }
  }
}

BasisIndex random_bits(Rng& rng, int n) {
  return static_cast<BasisIndex>(rng.raw() & ((std::uint64_t{1} << n) - 1));
}

bool literal_value(const Literal& lit, BasisIndex x, int n) {
  const bool bit = (x >> (n - lit.var)) & 1u;
  return bit != lit.negated;
}

}  // namespace

bool Conjunction::contains(const Literal& lit) const {
  return std::find(literals.begin(), literals.end(), lit) != literals.end();
}

bool Conjunction::eval(BasisIndex x) const {
  for (const Literal& lit : literals) {
    if (!literal_value(lit, x, n)) return false;
  }
  return true;
}

CnfFormula Conjunction::to_formula() const {
  CnfFormula f;
  f.variable_count = n;
  f.kind = FormulaKind::Cnf;
  f.clauses.reserve(literals.size());
  for (const Literal& lit : literals) {
    f.clauses.push_back(Clause{{lit}});
  }
  return f;
}

Hypothesis init_hypothesis(int n) {
  if (n < 1 || n > 16) {
    throw std::invalid_argument("init_hypothesis: variable count out of range [1, 16]");
  }
  Hypothesis h;
  h.n = n;
  h.literals.reserve(2 * static_cast<std::size_t>(n));
  for (int v = 1; v <= n; ++v) {
    h.literals.push_back(Literal{v, false});
    h.literals.push_back(Literal{v, true});
  }
  return h;
}

Conjunction parse_conjunction(const std::string& text, int n) {
  Conjunction c;
  c.n = n;
  std::istringstream in(text);
  std::string token;
  while (in >> token) {
    int value = 0;
    try {
      std::size_t used = 0;
      value = std::stoi(token, &used);
      if (used != token.size()) throw std::invalid_argument(token);
    } catch (const std::exception&) {
      throw ParseError("conjunction: bad token '" + token + "'");
    }
    if (value == 0) break;  // optional DIMACS-style terminator
    c.literals.push_back(Literal{std::abs(value), value < 0});
  }
  try {
    check_conjunction(c);
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("conjunction: ") + e.what());
  }
  return c;
}

std::string emit_conjunction(const Conjunction& c) {
  std::string out;
  for (const Literal& lit : c.literals) {
    if (!out.empty()) out += ' ';
    if (lit.negated) out += '-';
    out += std::to_string(lit.var);
  }
  return out;
}

void check_sample_promise(const Conjunction& target, const LabeledSample& sample) {
  check_conjunction(target);
  if (sample.state.qubits() != target.n) {
    throw PromiseViolation("sample qubit count does not match the target");
  }
  if (target.literals.empty()) {
    if (!sample.label) {
      throw PromiseViolation("empty target accepts everything; sample labeled 0");
    }
    return;
  }
  const CnfFormula formula = target.to_formula();
  std::optional<SectorLabel> sector;
  for (const auto& [x, amp] : sample.state.amplitudes()) {
    (void)amp;
    const SectorLabel label = eval_sector(formula, Assignment{x, target.n});
    if (!sector) {
      sector = label;
    } else if (sector->bits != label.bits) {
      throw PromiseViolation("sample support spans two sectors of the target network");
    }
  }
  const bool value = sector->all_ones();
  if (value != sample.label) {
    throw PromiseViolation("sample label disagrees with the target on its support");
  }
}

TrainStepResult train_step(const Hypothesis& h, const LabeledSample& sample, double t,
                           std::uint64_t seed, double gamma) {
  check_hypothesis(h);
  if (sample.state.qubits() != h.n) {
    throw std::invalid_argument("train_step: sample qubit count does not match hypothesis");
  }
  TrainStepResult result;
  result.post_state = sample.state;
  if (h.literals.empty()) {
    result.hypothesis = h;
    result.measured = SectorLabel{0u, 0};
    return result;
  }

  const int clause_count = static_cast<int>(h.literals.size());
  NetworkConfig net;
  net.formula = h.to_formula();
  net.gamma = gamma;
  net.mode = Mode::Standard;

  Rng rng(seed);
  const auto common = common_sector(net.formula, sample.state);

  std::uint32_t measured_bits = 0;
  if (common) {
    // Single sector: the readout never disturbs the state.
    for (int i = 0; i < clause_count; ++i) {
      const bool c = common->bit(i + 1);
      const double p1 = ancilla_one_probability(net, c, t);
      const bool bit = rng.uniform() < p1;
      if (bit) measured_bits |= 1u << (clause_count - 1 - i);
    }
  } else {
    // Support spans sectors: sample a basis string by Born weight, then the
    // ancilla bits for its sector, and condition the state on that outcome.
    const auto& amps = sample.state.amplitudes();
    const double pick = rng.uniform() * sample.state.norm() * sample.state.norm();
    double acc = 0.0;
    BasisIndex x = amps.back().first;
    for (const auto& [bits, amp] : amps) {
      acc += std::norm(amp);
      if (pick < acc) {
        x = bits;
        break;
      }
    }
    const SectorLabel sector = eval_sector(net.formula, Assignment{x, h.n});
    for (int i = 0; i < clause_count; ++i) {
      const double p1 = ancilla_one_probability(net, sector.bit(i + 1), t);
      const bool bit = rng.uniform() < p1;
      if (bit) measured_bits |= 1u << (clause_count - 1 - i);
    }
    const SectorLabel outcome{measured_bits, clause_count};
    auto [post, prob] = post_select_pure(net, sample.state, outcome, t);
    if (prob <= 0.0) {
      throw IntegrationError("train_step: sampled a zero-probability readout");
    }
    result.post_state = post;
  }

  result.measured = SectorLabel{measured_bits, clause_count};
  if (sample.label) {
    Hypothesis next;
    next.n = h.n;
    for (int i = 0; i < clause_count; ++i) {
      if (result.measured.bit(i + 1)) {
        next.literals.push_back(h.literals[static_cast<std::size_t>(i)]);
      } else {
        result.removed.push_back(h.literals[static_cast<std::size_t>(i)]);
      }
    }
    result.hypothesis = std::move(next);
  } else {
    result.hypothesis = h;
  }
  return result;
}

ConjunctionSampleStream::ConjunctionSampleStream(Conjunction target)
    : ConjunctionSampleStream(std::move(target), Options{}) {}

ConjunctionSampleStream::ConjunctionSampleStream(Conjunction target, Options options)
    : target_(std::move(target)), options_(options) {
  check_conjunction(target_);
  if (options_.positive_bias < 0.0 || options_.positive_bias > 1.0 ||
      options_.superposed_fraction < 0.0 || options_.superposed_fraction > 1.0 ||
      options_.max_superposed_support < 2) {
    throw std::invalid_argument("ConjunctionSampleStream: bad options");
  }
  std::vector<bool> used(static_cast<std::size_t>(target_.n) + 1, false);
  for (const Literal& lit : target_.literals) used[static_cast<std::size_t>(lit.var)] = true;
  for (int v = 1; v <= target_.n; ++v) {
    if (!used[static_cast<std::size_t>(v)]) free_vars_.push_back(v);
  }
}

LabeledSample ConjunctionSampleStream::next(Rng& rng) {
  const int n = target_.n;
  LabeledSample sample{PureState::basis_state(n, 0), false};

  const bool want_superposed =
      !free_vars_.empty() && rng.uniform() < options_.superposed_fraction;
  if (want_superposed) {
    // Fix every variable the target mentions (choosing one sector), then
    // superpose random patterns of the free variables inside it.
    BasisIndex fixed = 0;
    for (const Literal& lit : target_.literals) {
      const bool bit = rng.uniform() < 0.5;
      if (bit) fixed |= BasisIndex{1} << (n - lit.var);
    }
    const int f = static_cast<int>(free_vars_.size());
    const std::size_t pool = f >= 20 ? std::size_t{1} << 20 : std::size_t{1} << f;
    std::size_t m = 2 + static_cast<std::size_t>(
                            rng.uniform() * (options_.max_superposed_support - 1));
    m = std::min(m, pool);
    std::set<BasisIndex> patterns;
    while (patterns.size() < m) {
      BasisIndex x = fixed;
      for (int v : free_vars_) {
        if (rng.uniform() < 0.5) x |= BasisIndex{1} << (n - v);
      }
      patterns.insert(x);
    }
    std::vector<std::pair<BasisIndex, Complex>> amps;
    for (BasisIndex x : patterns) {
      Complex a;
      do {
        a = Complex(2.0 * rng.uniform() - 1.0, 2.0 * rng.uniform() - 1.0);
      } while (std::abs(a) < 1e-3);
      amps.emplace_back(x, a);
    }
    PureState psi(n, amps);
    psi.normalize();
    sample.state = std::move(psi);
    sample.label = target_.eval(fixed);
  } else if (rng.uniform() < options_.positive_bias) {
    BasisIndex x = 0;
    for (const Literal& lit : target_.literals) {
      if (!lit.negated) x |= BasisIndex{1} << (n - lit.var);
    }
    for (int v : free_vars_) {
      if (rng.uniform() < 0.5) x |= BasisIndex{1} << (n - v);
    }
    sample.state = PureState::basis_state(n, x);
    sample.label = true;
  } else {
    const BasisIndex x = random_bits(rng, n);
    sample.state = PureState::basis_state(n, x);
    sample.label = target_.eval(x);
  }

  check_sample_promise(target_, sample);
  return sample;
}

std::optional<bool> ConjunctionSampleStream::hypothesis_complete(const Hypothesis& h) const {
  if (h.n != target_.n) return false;
  return conjunctions_agree(h, target_);
}

ExhaustivePositiveStream::ExhaustivePositiveStream(Conjunction target)
    : target_(std::move(target)) {
  check_conjunction(target_);
  if (target_.n > 20) {
    throw CapacityError("ExhaustivePositiveStream: variable count above 20");
  }
  const BasisIndex limit = BasisIndex{1} << target_.n;
  for (BasisIndex x = 0; x < limit; ++x) {
    if (target_.eval(x)) positives_.push_back(x);
  }
}

LabeledSample ExhaustivePositiveStream::next(Rng&) {
  LabeledSample sample{PureState::basis_state(target_.n, positives_[cursor_]), true};
  cursor_ = (cursor_ + 1) % positives_.size();
  return sample;
}

std::optional<bool> ExhaustivePositiveStream::hypothesis_complete(const Hypothesis& h) const {
  if (h.n != target_.n) return false;
  return conjunctions_agree(h, target_);
}

bool conjunctions_agree(const Conjunction& a, const Conjunction& b) {
  if (a.n != b.n) {
    throw std::invalid_argument("conjunctions_agree: variable counts differ");
  }
  if (a.n > 20) {
    throw CapacityError("conjunctions_agree: variable count above 20");
  }
  const BasisIndex limit = BasisIndex{1} << a.n;
  for (BasisIndex x = 0; x < limit; ++x) {
    if (a.eval(x) != b.eval(x)) return false;
  }
  return true;
}

TrainResult train(int n, SampleStream& stream, const TrainOptions& options, std::uint64_t seed) {
  if (options.max_samples < 1) {
    throw std::invalid_argument("train: max_samples must be positive");
  }
  TrainResult result;
  result.hypothesis = init_hypothesis(n);
  Rng rng(seed);

  for (int step = 1; step <= options.max_samples; ++step) {
    const LabeledSample sample = stream.next(rng);
    const int clause_count = static_cast<int>(result.hypothesis.literals.size());
    double t = options.t;
    if (!(t > 0.0) && clause_count > 0) {
      t = sufficient_time_ancilla(clause_count, 1e-9, options.gamma);
    }
    const std::uint64_t step_seed = rng.raw();
    TrainStepResult stepped = train_step(result.hypothesis, sample, t, step_seed, options.gamma);

    TrainLogEntry entry;
    entry.step = step;
    entry.label = sample.label;
    entry.measured = stepped.measured;
    entry.literals_removed = static_cast<int>(stepped.removed.size());
    entry.remaining = static_cast<int>(stepped.hypothesis.literals.size());
    result.log.push_back(entry);

    if (!stepped.removed.empty()) ++result.update_count;
    result.hypothesis = std::move(stepped.hypothesis);
    result.samples_used = step;

    const auto done = stream.hypothesis_complete(result.hypothesis);
    if (done.has_value() && *done) {
      result.converged = true;
      break;
    }
  }
  return result;
}

PredictResult predict(const Hypothesis& h, const PureState& psi, double t, std::uint64_t seed,
                      double gamma) {
  check_hypothesis(h);
  if (psi.qubits() != h.n) {
    throw std::invalid_argument("predict: state qubit count does not match hypothesis");
  }
  PredictResult result;
  if (h.literals.empty()) {
    result.value = true;
    result.post_state = psi;
    result.input_fidelity = 1.0;
    return result;
  }
  NetworkConfig net;
  net.formula = h.to_formula();
  net.gamma = gamma;
  net.mode = Mode::Standard;
  PassiveReadout readout = classify_passive(net, psi, t, seed);
  result.value = readout.measured.all_ones();
  result.post_state = std::move(readout.post_state);
  result.input_fidelity = readout.input_fidelity;
  return result;
}

}  // namespace dqnet
