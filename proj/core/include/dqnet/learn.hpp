#pragma once

#include <optional>

#include "dqnet/classify.hpp"
#include "dqnet/dynamics.hpp"
#include "dqnet/qstate.hpp"

namespace dqnet {

/// A conjunction of literals over n variables (the empty conjunction is the
/// constant 1). Doubles as the learner's hypothesis and its target concept.
struct Conjunction {
  int n = 0;
  std::vector<Literal> literals;

  bool contains(const Literal& lit) const;
  bool eval(BasisIndex x) const;  // AND of the literals on assignment x
  /// One single-literal clause per literal, in stored order.
  CnfFormula to_formula() const;
};

using Hypothesis = Conjunction;

/// The most specific hypothesis: all 2n literals (x_v and ~x_v for every v).
/// Its conjunction is unsatisfiable, so it classifies nothing as positive.
Hypothesis init_hypothesis(int n);

/// Parse "1 -3" style text (whitespace-separated signed variable indices).
/// Blank text is the empty conjunction.
Conjunction parse_conjunction(const std::string& text, int n);
std::string emit_conjunction(const Conjunction& c);

struct LabeledSample {
  PureState state;
  bool label = false;
};

/// Verify the sample contract against a known target: the support must sit
/// inside one sector of the target's network and the label must equal the
/// target's value there. Throws PromiseViolation otherwise.
void check_sample_promise(const Conjunction& target, const LabeledSample& sample);

struct TrainStepResult {
  Hypothesis hypothesis;
  SectorLabel measured;           // readout of the current hypothesis network
  std::vector<Literal> removed;   // literals deleted by this step
  PureState post_state;           // the sample state after the readout
};

/// One learning round: wire the hypothesis literals as single-literal
/// clauses, evolve the sample for time t, measure every ancilla, and on a
/// positive sample delete the literals whose ancilla read 0. Negative
/// samples never change the hypothesis. When the sample lies inside a
/// single hypothesis sector the state is returned untouched.
TrainStepResult train_step(const Hypothesis& h, const LabeledSample& sample, double t,
                           std::uint64_t seed, double gamma = 1.0);

/// Source of labeled samples. hypothesis_complete lets a stream that knows
/// its target report exact functional agreement (std::nullopt = unknown).
class SampleStream {
 public:
  virtual ~SampleStream() = default;
  virtual LabeledSample next(Rng& rng) = 0;
  virtual std::optional<bool> hypothesis_complete(const Hypothesis&) const {
    return std::nullopt;
  }
};

/// Random samples for a target conjunction: classical positives/negatives
/// plus optional superpositions spread across one target sector.
class ConjunctionSampleStream : public SampleStream {
 public:
  struct Options {
    double positive_bias = 0.5;        // chance of forcing a positive classical draw
    double superposed_fraction = 0.0;  // chance of a within-sector superposition
    int max_superposed_support = 4;
  };
  explicit ConjunctionSampleStream(Conjunction target);
  ConjunctionSampleStream(Conjunction target, Options options);

  LabeledSample next(Rng& rng) override;
  std::optional<bool> hypothesis_complete(const Hypothesis& h) const override;
  const Conjunction& target() const { return target_; }

 private:
  Conjunction target_;
  Options options_;
  std::vector<int> free_vars_;
};

/// Every satisfying assignment of the target once, in ascending order,
/// then cycling.
class ExhaustivePositiveStream : public SampleStream {
 public:
  explicit ExhaustivePositiveStream(Conjunction target);
  LabeledSample next(Rng& rng) override;
  std::optional<bool> hypothesis_complete(const Hypothesis& h) const override;

 private:
  Conjunction target_;
  std::vector<BasisIndex> positives_;
  std::size_t cursor_ = 0;
};

struct TrainLogEntry {
  int step = 0;
  bool label = false;
  SectorLabel measured;
  int literals_removed = 0;
  int remaining = 0;
};

struct TrainOptions {
  int max_samples = 512;
  double t = -1.0;      // <= 0: per-step sufficient time at epsilon = 1e-9
  double gamma = 1.0;
};

struct TrainResult {
  Hypothesis hypothesis;
  int update_count = 0;  // steps that deleted at least one literal (<= 2n)
  int samples_used = 0;
  bool converged = false;
  std::vector<TrainLogEntry> log;
};

TrainResult train(int n, SampleStream& stream, const TrainOptions& options, std::uint64_t seed);

/// Exact functional agreement of two conjunctions over all 2^n assignments.
bool conjunctions_agree(const Conjunction& a, const Conjunction& b);

struct PredictResult {
  bool value = false;
  PureState post_state;
  double input_fidelity = 0.0;
};

/// Classify psi with the hypothesis network without consuming it: the AND
/// of the measured ancilla bits. psi must lie inside a single hypothesis
/// sector (PromiseViolation otherwise). The empty hypothesis accepts
/// everything and never touches the state.
PredictResult predict(const Hypothesis& h, const PureState& psi, double t, std::uint64_t seed,
                      double gamma = 1.0);

}  // namespace dqnet
