// Cost of the brute-force master-equation integrator, which scales with the
// dense joint dimension 4^(n+N) per step.

#include <benchmark/benchmark.h>

#include "dqnet/dynamics.hpp"
#include "dqnet/oracle.hpp"
#include "dqnet/qstate.hpp"

namespace {

using namespace dqnet;

NetworkConfig net_for(int n) {
  CnfFormula f;
  f.variable_count = n;
  Clause c;
  c.literals.push_back(Literal{1, false});
  c.literals.push_back(Literal{2, true});
  f.clauses.push_back(c);
  Clause c2;
  c2.literals.push_back(Literal{n, false});
  f.clauses.push_back(c2);
  return NetworkConfig{f, 1.0, Mode::Standard};
}

void BM_apply_lindbladian(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const NetworkConfig net = net_for(n);
  const DenseDensity rho =
      dense_initial_state(net, PureState::uniform_superposition(n));
  for (auto _ : state) benchmark::DoNotOptimize(apply_lindbladian(net, rho));
  state.SetComplexityN(1 << (n + 2));
}
BENCHMARK(BM_apply_lindbladian)->DenseRange(2, 8, 2)->Complexity(benchmark::oNSquared);

void BM_integrate_unit_time(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const NetworkConfig net = net_for(n);
  const DenseDensity rho0 =
      dense_initial_state(net, PureState::uniform_superposition(n));
  for (auto _ : state)
    benchmark::DoNotOptimize(integrate_master_equation(net, rho0, 1.0, 0.01));
}
BENCHMARK(BM_integrate_unit_time)->DenseRange(2, 6, 2);

}  // namespace
