#include <doctest.h>

#include <cmath>
#include <limits>

#include "dqnet/classify.hpp"
#include "dqnet/errors.hpp"
#include "test_helpers.hpp"

using namespace dqnet;
using testutil::make_formula;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

// (x1 v ~x2) ^ (~x1 v x2): sectors 11 on {00, 11}, 10 on {10}, 01 on {01}
CnfFormula agreement_formula() { return make_formula(2, {{1, -2}, {-1, 2}}); }
}  // namespace

TEST_CASE("classify_exact on basis states reads off the clause values") {
  Rng rng(1001);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 1 + static_cast<int>(rng.uniform() * 4);
    const int N = 1 + static_cast<int>(rng.uniform() * 3);
    const CnfFormula f = testutil::random_cnf(rng, n, N);
    const BasisIndex x =
        static_cast<BasisIndex>(rng.uniform() * static_cast<double>(BasisIndex{1} << n));
    const ClassificationResult r = classify_exact(f, PureState::basis_state(n, x));

    const SectorLabel label = eval_sector(f, Assignment{x, n});
    REQUIRE(r.sector_weights.size() == 1);
    CHECK(r.sector_weights.at(label) == 1.0);
    CHECK(r.c_hat_1 == (eval_formula(f, Assignment{x, n}) ? 1.0 : 0.0));
    for (int i = 1; i <= N; ++i)
      CHECK(r.c_tilde[static_cast<std::size_t>(i - 1)] == (label.bit(i) ? 1.0 : 0.0));
    CHECK(r.shots == 0);
    CHECK(is_hypercube_vertex(r.c_tilde));
  }
}

TEST_CASE("classify_exact splits the uniform state into known sector weights") {
  const ClassificationResult r =
      classify_exact(agreement_formula(), PureState::uniform_superposition(2));
  CHECK(r.sector_weights.at(SectorLabel{0b11, 2}) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(r.sector_weights.at(SectorLabel{0b10, 2}) == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(r.sector_weights.at(SectorLabel{0b01, 2}) == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(r.c_tilde[0] == doctest::Approx(0.75).epsilon(1e-14));
  CHECK(r.c_tilde[1] == doctest::Approx(0.75).epsilon(1e-14));
  CHECK(r.c_hat_1 == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(r.c_hat_2 == doctest::Approx(0.5625).epsilon(1e-14));
  CHECK_FALSE(is_hypercube_vertex(r.c_tilde));

  CHECK_THROWS_AS(classify_exact(agreement_formula(), PureState::uniform_superposition(3)),
                  std::invalid_argument);
}

TEST_CASE("classify_sampled is seed-deterministic") {
  const NetworkConfig net{agreement_formula(), 1.0, Mode::Standard};
  const PureState psi = PureState::uniform_superposition(2);
  const ClassificationResult a = classify_sampled(net, psi, 1.5, 400, 99);
  const ClassificationResult b = classify_sampled(net, psi, 1.5, 400, 99);
  CHECK(a.sector_weights == b.sector_weights);
  CHECK(a.c_tilde == b.c_tilde);
  CHECK(a.c_hat_1 == b.c_hat_1);
  CHECK(a.shots == 400);
  CHECK_THROWS_AS(classify_sampled(net, psi, 1.0, 0, 1), std::invalid_argument);
}

TEST_CASE("classify_sampled at infinite time estimates the exact sector weights") {
  const NetworkConfig net{agreement_formula(), 1.0, Mode::Standard};
  const PureState psi = PureState::uniform_superposition(2);
  const int shots = 20000;
  const ClassificationResult sampled = classify_sampled(net, psi, kInf, shots, 4242);
  const ClassificationResult exact = classify_exact(net.formula, psi);

  for (const auto& [label, p] : exact.sector_weights) {
    const double freq = sampled.sector_weights.count(label) ? sampled.sector_weights.at(label)
                                                            : 0.0;
    const double sigma = std::sqrt(p * (1.0 - p) / shots);
    CHECK(std::abs(freq - p) < 5.0 * sigma + 1e-9);
  }
  CHECK(std::abs(sampled.c_hat_1 - exact.c_hat_1) <
        5.0 * sampled.c_hat_1_stderr + 1e-9);
}

TEST_CASE("classify_sampled at finite time follows the per-clause decay law") {
  const double gamma = 1.0, t = 0.8;
  const NetworkConfig net{make_formula(2, {{1}, {2}}), gamma, Mode::Standard};
  // basis 10: clause 1 true (inert ancilla), clause 2 false (decaying)
  const PureState psi = PureState::basis_state(2, 0b10);
  const int shots = 20000;
  const ClassificationResult r = classify_sampled(net, psi, t, shots, 777);

  CHECK(r.c_tilde[0] == 1.0);  // inert: every shot reads 1
  const double p = std::exp(-gamma * t);
  const double sigma = std::sqrt(p * (1.0 - p) / shots);
  CHECK(std::abs(r.c_tilde[1] - p) < 5.0 * sigma + 1e-9);
  CHECK(r.c_tilde_stderr[1] == doctest::Approx(sigma).epsilon(0.1));
}

TEST_CASE("dfs membership and common sector detection") {
  const CnfFormula f = agreement_formula();
  const PureState inside(2, {{0b00, {std::sqrt(0.5), 0.0}}, {0b11, {0.0, std::sqrt(0.5)}}});
  const PureState across = PureState::uniform_superposition(2);

  CHECK(is_dfs_member(f, inside, SectorLabel{0b11, 2}));
  CHECK_FALSE(is_dfs_member(f, inside, SectorLabel{0b10, 2}));
  CHECK_FALSE(is_dfs_member(f, across, SectorLabel{0b11, 2}));

  const auto sector = common_sector(f, inside);
  REQUIRE(sector.has_value());
  CHECK(*sector == SectorLabel{0b11, 2});
  CHECK_FALSE(common_sector(f, across).has_value());

  CHECK_THROWS_AS(is_dfs_member(f, inside, SectorLabel{0b1, 1}), std::invalid_argument);
}

TEST_CASE("classify_passive keeps sector states untouched") {
  const NetworkConfig net{agreement_formula(), 1.0, Mode::Standard};
  const PureState inside(2, {{0b00, {0.6, 0.0}}, {0b11, {0.0, 0.8}}});

  const PassiveReadout r = classify_passive(net, inside, kInf, 31);
  CHECK(r.measured == SectorLabel{0b11, 2});  // exact at t = infinity
  CHECK(r.input_fidelity == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(fidelity(r.post_state, inside) == doctest::Approx(1.0).epsilon(1e-14));

  const PassiveReadout again = classify_passive(net, inside, kInf, 31);
  CHECK(again.measured == r.measured);

  CHECK_THROWS_AS(classify_passive(net, PureState::uniform_superposition(2), 1.0, 1),
                  PromiseViolation);
}

TEST_CASE("classify_passive readout statistics follow the decay law") {
  const NetworkConfig net{make_formula(1, {{1}}), 1.0, Mode::Standard};
  const PureState zero = PureState::basis_state(1, 0);  // clause false
  const double t = 1.1;
  const double p = std::exp(-t);  // chance the ancilla still reads 1

  int ones = 0;
  const int shots = 20000;
  for (int s = 0; s < shots; ++s)
    ones += classify_passive(net, zero, t, 5000u + static_cast<std::uint64_t>(s)).measured.bit(1);
  const double freq = static_cast<double>(ones) / shots;
  const double sigma = std::sqrt(p * (1.0 - p) / shots);
  CHECK(std::abs(freq - p) < 5.0 * sigma + 1e-9);
}

TEST_CASE("hypercube vertex detection") {
  CHECK(is_hypercube_vertex({1.0, 0.0, 1.0}));
  CHECK(is_hypercube_vertex({1.0 - 1e-13, 1e-13}));
  CHECK_FALSE(is_hypercube_vertex({0.4, 1.0}));
  CHECK(is_hypercube_vertex({0.4, 1.0}, 0.5));
  CHECK(is_hypercube_vertex({}));
}
