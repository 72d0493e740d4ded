// Scaling of the factored closed-form channel: cost is support^2 * clauses,
// independent of the 2^(n+N) joint dimension.

#include <benchmark/benchmark.h>

#include "dqnet/dynamics.hpp"
#include "dqnet/formula.hpp"
#include "dqnet/qstate.hpp"

namespace {

using namespace dqnet;

CnfFormula chain_formula(int n, int clauses) {
  CnfFormula f;
  f.variable_count = n;
  for (int i = 0; i < clauses; ++i) {
    Clause c;
    c.literals.push_back(Literal{1 + i % n, false});
    c.literals.push_back(Literal{1 + (i + 1) % n, true});
    f.clauses.push_back(c);
  }
  return f;
}

void BM_evolve_full_support(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const NetworkConfig net{chain_formula(n, 3), 1.0, Mode::Standard};
  const PureState psi = PureState::uniform_superposition(n);
  for (auto _ : state) benchmark::DoNotOptimize(evolve(net, psi, 0.8));
  state.SetComplexityN(1 << n);
}
BENCHMARK(BM_evolve_full_support)->DenseRange(2, 10, 2)->Complexity(benchmark::oNSquared);

void BM_evolve_clause_count(benchmark::State& state) {
  const int clauses = static_cast<int>(state.range(0));
  const NetworkConfig net{chain_formula(6, clauses), 1.0, Mode::Standard};
  const PureState psi = PureState::uniform_superposition(6);
  for (auto _ : state) benchmark::DoNotOptimize(evolve(net, psi, 0.8));
}
BENCHMARK(BM_evolve_clause_count)->DenseRange(1, 9, 2);

void BM_densify(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const NetworkConfig net{chain_formula(n, 3), 1.0, Mode::Standard};
  const JointState joint = evolve(net, PureState::uniform_superposition(n), 0.8);
  for (auto _ : state) benchmark::DoNotOptimize(densify(joint));
}
BENCHMARK(BM_densify)->DenseRange(2, 8, 2);

void BM_post_select(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const NetworkConfig net{chain_formula(n, 3), 1.0, Mode::Standard};
  const PureState psi = PureState::uniform_superposition(n);
  const SectorLabel ones{(1u << 3) - 1u, 3};
  for (auto _ : state) benchmark::DoNotOptimize(post_select_pure(net, psi, ones, 2.0));
}
BENCHMARK(BM_post_select)->DenseRange(4, 12, 4);

}  // namespace
