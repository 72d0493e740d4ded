// Hot-path formula evaluation: compiled clause masks vs the structural
// evaluator, and the exhaustive sector partition.

#include <benchmark/benchmark.h>

#include "dqnet/formula.hpp"
#include "dqnet/qstate.hpp"

namespace {

using namespace dqnet;

CnfFormula dense_cnf(int n, int clauses) {
  Rng rng(99);
  CnfFormula f;
  f.variable_count = n;
  for (int i = 0; i < clauses; ++i) {
    Clause c;
    for (int j = 0; j < 3; ++j) {
      const int var = 1 + static_cast<int>(rng.raw() % static_cast<std::uint64_t>(n));
      bool dup = false;
      for (const Literal& l : c.literals) dup = dup || l.var == var;
      if (!dup) c.literals.push_back(Literal{var, rng.raw() % 2 == 0});
    }
    f.clauses.push_back(c);
  }
  return f;
}

void BM_eval_sector_structural(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const CnfFormula f = dense_cnf(n, 8);
  for (auto _ : state)
    for (BasisIndex x = 0; x < (BasisIndex{1} << n); ++x)
      benchmark::DoNotOptimize(eval_sector(f, Assignment{x, n}));
  state.SetItemsProcessed(state.iterations() * (1 << n));
}
BENCHMARK(BM_eval_sector_structural)->DenseRange(8, 16, 4);

void BM_eval_sector_compiled(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const CnfFormula f = dense_cnf(n, 8);
  const std::vector<ClauseEval> compiled = compile_formula(f);
  for (auto _ : state)
    for (BasisIndex x = 0; x < (BasisIndex{1} << n); ++x)
      benchmark::DoNotOptimize(eval_sector_bits(compiled, x));
  state.SetItemsProcessed(state.iterations() * (1 << n));
}
BENCHMARK(BM_eval_sector_compiled)->DenseRange(8, 16, 4);

void BM_partition(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const CnfFormula f = dense_cnf(n, 8);
  for (auto _ : state) benchmark::DoNotOptimize(partition(f));
  state.SetItemsProcessed(state.iterations() * (1 << n));
}
BENCHMARK(BM_partition)->DenseRange(8, 14, 2);

}  // namespace
