#include <doctest.h>

#include <cmath>
#include <complex>

#include "dqnet/errors.hpp"
#include "dqnet/qstate.hpp"
#include "test_helpers.hpp"

using namespace dqnet;
using testutil::ket_bra;
using testutil::kron;
using testutil::kron_all;

namespace {

AncillaFactor pure_qubit_factor(double theta, double phi) {
  Eigen::Vector2cd v;
  v << std::cos(theta), std::sin(theta) * std::exp(Complex(0.0, phi));
  return v * v.adjoint();
}

/// Product state |psi><psi| (x) F_1 (x) ... (x) F_N in factored form,
/// plus the same operator built densely through the independent kron helper.
struct ProductFixture {
  JointState joint;
  Eigen::MatrixXcd dense;
};

ProductFixture product_fixture(Rng& rng, int n, int N) {
  const PureState psi = testutil::random_state(rng, n, 0.7);
  std::vector<AncillaFactor> factors;
  for (int i = 0; i < N; ++i)
    factors.push_back(pure_qubit_factor(rng.uniform() * 1.5, rng.uniform() * 6.0));

  ProductFixture fx;
  fx.joint = JointState(n, N);
  for (const auto& [x, ax] : psi.amplitudes())
    for (const auto& [y, ay] : psi.amplitudes())
      fx.joint.add_term(x, y, ax * std::conj(ay), factors);

  Eigen::MatrixXcd sys = Eigen::MatrixXcd::Zero(Eigen::Index{1} << n, Eigen::Index{1} << n);
  for (const auto& [x, ax] : psi.amplitudes())
    for (const auto& [y, ay] : psi.amplitudes()) sys(x, y) = ax * std::conj(ay);
  std::vector<Eigen::MatrixXcd> pieces{sys};
  for (const AncillaFactor& f : factors) pieces.push_back(f);
  fx.dense = kron_all(pieces);
  return fx;
}

}  // namespace

TEST_CASE("PureState constructor validates and sorts") {
  PureState psi(2, {{2, {0.0, 1.0}}, {0, {1.0, 0.0}}});
  CHECK(psi.amplitudes()[0].first == 0);
  CHECK(psi.amplitudes()[1].first == 2);
  CHECK(psi.amplitude(2) == Complex{0.0, 1.0});
  CHECK(psi.amplitude(1) == Complex{});

  CHECK_THROWS_AS(PureState(0, {{0, {1.0, 0.0}}}), CapacityError);
  CHECK_THROWS_AS(PureState(25, {{0, {1.0, 0.0}}}), CapacityError);
  CHECK_THROWS_AS(PureState(2, {{4, {1.0, 0.0}}}), std::invalid_argument);
  CHECK_THROWS_AS(PureState(2, {{1, {1.0, 0.0}}, {1, {0.5, 0.0}}}), std::invalid_argument);
}

TEST_CASE("uniform superposition and normalization") {
  const PureState plus = PureState::uniform_superposition(3);
  CHECK(plus.support_size() == 8);
  CHECK(plus.norm() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(plus.amplitude(5).real() == doctest::Approx(std::pow(0.5, 1.5)).epsilon(1e-14));

  PureState v(1, {{0, {3.0, 0.0}}, {1, {0.0, 4.0}}});
  CHECK(v.norm() == doctest::Approx(5.0).epsilon(1e-14));
  v.normalize();
  CHECK(v.amplitude(0).real() == doctest::Approx(0.6).epsilon(1e-14));
  CHECK(v.amplitude(1).imag() == doctest::Approx(0.8).epsilon(1e-14));

  PureState zero(1, {});
  CHECK_THROWS_AS(zero.normalize(), std::invalid_argument);
}

TEST_CASE("inner product and fidelity") {
  const PureState a = PureState::basis_state(2, 0b01);
  const PureState b = PureState::basis_state(2, 0b10);
  CHECK(inner_product(a, b) == Complex{});
  CHECK(fidelity(a, a) == doctest::Approx(1.0).epsilon(1e-14));

  const PureState c(2, {{0b01, {std::sqrt(0.5), 0.0}}, {0b10, {0.0, std::sqrt(0.5)}}});
  CHECK(fidelity(a, c) == doctest::Approx(0.5).epsilon(1e-13));
  CHECK_THROWS_AS(inner_product(a, PureState::basis_state(3, 0)), std::invalid_argument);
}

TEST_CASE("JointState add_term and validation") {
  JointState j(1, 2);
  CHECK_THROWS_AS(j.add_term(0, 0, {1.0, 0.0}, {AncillaFactor::Identity()}),
                  std::invalid_argument);

  // coefficients below the prune tolerance are dropped
  j.add_term(0, 1, {1e-16, 0.0}, {ket_bra(0, 0), ket_bra(0, 0)});
  CHECK(j.terms().empty());

  j.add_term(0, 0, {1.0, 0.0}, {ket_bra(0, 0), ket_bra(1, 1)});
  CHECK(j.total_trace() == doctest::Approx(1.0).epsilon(1e-14));
  j.validate();

  // an off-diagonal term without its Hermitian partner fails validation
  j.add_term(0, 1, {0.25, 0.0}, {ket_bra(0, 0), ket_bra(1, 1)});
  CHECK_THROWS_AS(j.validate(), std::logic_error);
}

TEST_CASE("densify matches an independent Kronecker construction") {
  Rng rng(314159);
  for (int trial = 0; trial < 8; ++trial) {
    const int n = 1 + static_cast<int>(rng.uniform() * 3);
    const int N = 1 + static_cast<int>(rng.uniform() * 3);
    const ProductFixture fx = product_fixture(rng, n, N);
    const DenseDensity got = densify(fx.joint);
    CHECK((got - fx.dense).cwiseAbs().maxCoeff() < 1e-13);
  }

  JointState big(10, 3);
  big.add_term(0, 0, {1.0, 0.0}, {ket_bra(0, 0), ket_bra(0, 0), ket_bra(0, 0)});
  CHECK_THROWS_AS(densify(big), CapacityError);
}

TEST_CASE("partial trace agrees with dense trace-out") {
  Rng rng(271828);
  for (int trial = 0; trial < 8; ++trial) {
    const int n = 1 + static_cast<int>(rng.uniform() * 3);
    const int N = 1 + static_cast<int>(rng.uniform() * 3);
    const ProductFixture fx = product_fixture(rng, n, N);
    const DenseDensity got = partial_trace_ancillas(fx.joint);
    const DenseDensity want = testutil::trace_out_ancillas(fx.dense, n, N);
    CHECK((got - want).cwiseAbs().maxCoeff() < 1e-13);
  }
}

TEST_CASE("born probabilities agree with the dense diagonal") {
  Rng rng(1618);
  for (int trial = 0; trial < 8; ++trial) {
    const int n = 1 + static_cast<int>(rng.uniform() * 3);
    const int N = 1 + static_cast<int>(rng.uniform() * 3);
    const ProductFixture fx = product_fixture(rng, n, N);
    const auto got = born_probabilities(fx.joint);
    const auto want = testutil::dense_readout_distribution(fx.dense, n, N);
    double total = 0.0;
    for (const auto& [label, p] : got) {
      CHECK(p == doctest::Approx(want.at(label.bits)).epsilon(1e-12));
      total += p;
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("born probabilities prune exact-zero branches") {
  JointState j(1, 2);
  j.add_term(0, 0, {1.0, 0.0}, {ket_bra(1, 1), ket_bra(0, 0)});
  const auto probs = born_probabilities(j);
  REQUIRE(probs.size() == 1);
  const auto& [label, p] = *probs.begin();
  CHECK(label.to_string() == "10");
  CHECK(p == 1.0);
}

TEST_CASE("measure_ancillas is seed-deterministic and Born-consistent") {
  Rng rng(57721);
  const ProductFixture fx = product_fixture(rng, 2, 2);
  const auto probs = born_probabilities(fx.joint);

  const MeasurementOutcome first = measure_ancillas(fx.joint, 12345);
  const MeasurementOutcome again = measure_ancillas(fx.joint, 12345);
  CHECK(first.label == again.label);
  CHECK(first.probability == again.probability);  // bit-identical reruns
  CHECK(first.probability == doctest::Approx(probs.at(first.label)).epsilon(1e-12));

  // product input => every conditioned state is the pure system state
  REQUIRE(first.is_pure());
  CHECK(first.pure().norm() == doctest::Approx(1.0).epsilon(1e-12));

  // empirical frequencies over many seeds approach the Born weights
  std::map<std::uint32_t, int> counts;
  const int shots = 4000;
  for (int s = 0; s < shots; ++s) counts[measure_ancillas(fx.joint, 900000u + s).label.bits]++;
  for (const auto& [label, p] : probs) {
    const double freq = counts[label.bits] / static_cast<double>(shots);
    const double sigma = std::sqrt(p * (1.0 - p) / shots);
    CHECK(std::abs(freq - p) < 5.0 * sigma + 1e-9);
  }
}

TEST_CASE("measure_ancillas returns a dense state for rank-2 blocks") {
  // Equal mixture of |0> and |1> on the system, ancilla pinned to |1>:
  // the conditioned block on outcome "1" is maximally mixed.
  JointState j(1, 1);
  j.add_term(0, 0, {0.5, 0.0}, {ket_bra(1, 1)});
  j.add_term(1, 1, {0.5, 0.0}, {ket_bra(1, 1)});
  const MeasurementOutcome out = measure_ancillas(j, 7);
  CHECK(out.label.to_string() == "1");
  CHECK(out.probability == doctest::Approx(1.0).epsilon(1e-14));
  REQUIRE_FALSE(out.is_pure());
  CHECK(out.dense()(0, 0).real() == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(out.dense()(1, 1).real() == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("operator and trace norms on known operators") {
  Eigen::MatrixXcd p0 = ket_bra(0, 0), p1 = ket_bra(1, 1);
  CHECK(operator_norm_distance(p0, p1) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(trace_norm_distance(p0, p1) == doctest::Approx(2.0).epsilon(1e-13));

  Eigen::MatrixXcd x(2, 2);
  x << 0, 1, 1, 0;
  CHECK(operator_norm(x) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(trace_norm(x) == doctest::Approx(2.0).epsilon(1e-13));

  // non-Hermitian: singular values of [[0,1],[0,0]] are {1, 0}
  Eigen::MatrixXcd raise = ket_bra(0, 1);
  CHECK(operator_norm(raise) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(trace_norm(raise) == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("purity and pure-state fidelity against density matrices") {
  const PureState psi(1, {{0, {std::sqrt(0.5), 0.0}}, {1, {0.0, -std::sqrt(0.5)}}});
  const DenseDensity rho = dense_from_pure(psi);
  CHECK(purity(rho) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(fidelity(psi, rho) == doctest::Approx(1.0).epsilon(1e-13));

  DenseDensity mixed = 0.5 * (ket_bra(0, 0) + ket_bra(1, 1));
  CHECK(purity(mixed) == doctest::Approx(0.5).epsilon(1e-13));
  CHECK(fidelity(psi, mixed) == doctest::Approx(0.5).epsilon(1e-13));
}

TEST_CASE("state JSON round-trips exactly") {
  Rng rng(424242);
  const PureState psi = testutil::random_state(rng, 3, 0.8);
  const std::string text = emit_state_json(psi);
  const PureState back = parse_state_json(text);
  REQUIRE(back.qubits() == psi.qubits());
  REQUIRE(back.support_size() == psi.support_size());
  // the writer is %.17g (round-trip exact); the reader renormalizes, which
  // can shift each component by an ulp
  for (const auto& [x, a] : psi.amplitudes()) CHECK(std::abs(back.amplitude(x) - a) < 1e-15);
  CHECK(text.find("\"bits\"") != std::string::npos);
}

TEST_CASE("state JSON validates input") {
  CHECK_THROWS_AS(parse_state_json("not json"), ParseError);
  CHECK_THROWS_AS(parse_state_json(R"({"amplitudes": []})"), ParseError);
  CHECK_THROWS_AS(parse_state_json(R"({"n": 2, "amplitudes": [{"bits": "0100", "re": 1.0}]})"),
                  ParseError);
  // reader normalizes
  const PureState psi =
      parse_state_json(R"({"n": 1, "amplitudes": [{"bits": "0", "re": 2.0, "im": 0.0}]})");
  CHECK(psi.norm() == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("rng reproduces the published splitmix64 streams") {
  Rng r0(0);
  CHECK(r0.raw() == 0xe220a8397b1dcdafULL);
  CHECK(r0.raw() == 0x6e789e6aa1b965f4ULL);
  CHECK(r0.raw() == 0x06c45d188009454fULL);

  Rng r42(42);
  CHECK(r42.raw() == 0xbdd732262feb6e95ULL);
  CHECK(r42.raw() == 0x28efe333b266f103ULL);
  CHECK(r42.raw() == 0x47526757130f9f52ULL);

  Rng r123(123456789);
  CHECK(r123.raw() == 0x223c74d93deb7679ULL);
  CHECK(r123.raw() == 0x7a91dd183971ee2eULL);
  CHECK(r123.raw() == 0x310e0831409afde5ULL);

  Rng u(0);
  CHECK(u.uniform() == doctest::Approx(0.8833108082136426).epsilon(1e-15));
  for (int i = 0; i < 1000; ++i) {
    const double v = u.uniform();
    CHECK(v >= 0.0);
    CHECK(v < 1.0);
  }
}
