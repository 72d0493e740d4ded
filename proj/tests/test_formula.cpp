#include <doctest.h>

#include <algorithm>
#include <set>

#include "dqnet/errors.hpp"
#include "dqnet/formula.hpp"
#include "test_helpers.hpp"

using namespace dqnet;
using testutil::make_formula;

TEST_CASE("parse_dimacs reads headers, comments and multi-line clauses") {
  const std::string text =
      "c a comment\n"
      "p cnf 3 2\n"
      "1 -2 0\n"
      "c another\n"
      "2\n"
      "3 0\n";
  const CnfFormula f = parse_dimacs(text);
  CHECK(f.variable_count == 3);
  CHECK(f.kind == FormulaKind::Cnf);
  REQUIRE(f.clause_count() == 2);
  CHECK(f.clauses[0] == Clause{{Literal{1, false}, Literal{2, true}}});
  CHECK(f.clauses[1] == Clause{{Literal{2, false}, Literal{3, false}}});
}

TEST_CASE("parse_dimacs accepts the dnf dual header") {
  const CnfFormula f = parse_dimacs("p dnf 2 1\n1 2 0\n");
  CHECK(f.kind == FormulaKind::Dnf);
  CHECK(f.clause_count() == 1);
}

TEST_CASE("parse_dimacs rejects malformed input with line numbers") {
  CHECK_THROWS_AS(parse_dimacs("1 0\n"), ParseError);
  CHECK_THROWS_AS(parse_dimacs("p cnf 2 2\n1 0\n"), ParseError);     // clause count short
  CHECK_THROWS_AS(parse_dimacs("p cnf 2 1\n1 0\n2 0\n"), ParseError);  // too many
  CHECK_THROWS_AS(parse_dimacs("p cnf 2 1\n3 0\n"), ParseError);     // var out of range
  CHECK_THROWS_AS(parse_dimacs("p cnf 2 1\n0\n"), ParseError);       // empty clause
  CHECK_THROWS_AS(parse_dimacs("p cnf 2 1\n1 2\n"), ParseError);     // missing terminator
  CHECK_THROWS_AS(parse_dimacs("p cnf 2 1\nx 0\n"), ParseError);     // garbage token
  try {
    parse_dimacs("p cnf 2 1\n\n3 0\n");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
}

TEST_CASE("emit_dimacs round-trips normalized formulas") {
  for (FormulaKind kind : {FormulaKind::Cnf, FormulaKind::Dnf}) {
    const CnfFormula f = make_formula(4, {{1, -2, 4}, {3}, {-1, -4}}, kind);
    CHECK(parse_dimacs(emit_dimacs(f)) == f);
  }
}

TEST_CASE("normalize_clause merges duplicates and flags complementary pairs") {
  const Clause dup{{Literal{1, false}, Literal{1, false}, Literal{2, true}}};
  const auto merged = normalize_clause(dup);
  REQUIRE(merged.has_value());
  CHECK(merged->literals.size() == 2);

  const Clause taut{{Literal{1, false}, Literal{1, true}}};
  CHECK_FALSE(normalize_clause(taut).has_value());
}

TEST_CASE("normalize_formula drops degenerate clauses with warnings") {
  CnfFormula f = make_formula(2, {{1, -1}, {2}});
  const NormalizeResult r = normalize_formula(f);
  CHECK(r.formula.clause_count() == 1);
  CHECK(r.warnings.size() == 1);
  CHECK(r.formula.kind == f.kind);
}

TEST_CASE("to_three_cnf splits long clauses with the chained construction") {
  {
    const CnfFormula f = make_formula(4, {{1, 2, 3, 4}});
    const auto [g, map] = to_three_cnf(f);
    CHECK(g.clause_count() == 2);
    CHECK(map.auxiliaries.size() == 1);
    CHECK(g.variable_count == 5);
  }
  {
    const CnfFormula f = make_formula(6, {{1, 2, 3, 4, 5, 6}});
    const auto [g, map] = to_three_cnf(f);
    CHECK(g.clause_count() == 4);
    CHECK(map.auxiliaries.size() == 3);
    CHECK(map.original_variable_count == 6);
    CHECK(map.total_variable_count == 9);
    for (const auto& aux : map.auxiliaries) CHECK(aux.source_clause == 0);
  }
  CHECK_THROWS_AS(to_three_cnf(make_formula(4, {{1, 2, 3, 4}}, FormulaKind::Dnf)),
                  std::invalid_argument);
}

TEST_CASE("to_three_cnf preserves the satisfying set on original variables") {
  Rng rng(2024);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 4 + static_cast<int>(rng.uniform() * 3);  // 4..6
    const int len = 4 + static_cast<int>(rng.uniform() * (n - 3));
    std::vector<int> vars;
    for (int v = 1; v <= n; ++v) vars.push_back(v);
    std::vector<int> lits;
    for (int l = 0; l < len; ++l) {
      const std::size_t pick = static_cast<std::size_t>(rng.uniform() * vars.size());
      lits.push_back(rng.uniform() < 0.5 ? -vars[pick] : vars[pick]);
      vars.erase(vars.begin() + static_cast<std::ptrdiff_t>(pick));
    }
    const CnfFormula f = make_formula(n, {lits, {1}});
    const auto [g, map] = to_three_cnf(f);
    const int total = map.total_variable_count;
    const int aux = total - n;
    for (BasisIndex x = 0; x < (BasisIndex{1} << n); ++x) {
      const bool sat_f = eval_formula(f, Assignment{x, n});
      bool extendable = false;
      for (BasisIndex e = 0; e < (BasisIndex{1} << aux) && !extendable; ++e) {
        const BasisIndex full = (x << aux) | e;
        extendable = eval_formula(g, Assignment{full, total});
      }
      REQUIRE(sat_f == extendable);
    }
  }
}

TEST_CASE("clause and formula evaluation, both kinds") {
  // CNF: (x1 v ~x2) ^ (x2)
  const CnfFormula cnf = make_formula(2, {{1, -2}, {2}});
  CHECK_FALSE(eval_formula(cnf, Assignment{0b00, 2}));
  CHECK_FALSE(eval_formula(cnf, Assignment{0b01, 2}));
  CHECK_FALSE(eval_formula(cnf, Assignment{0b10, 2}));
  CHECK(eval_formula(cnf, Assignment{0b11, 2}));

  // DNF: (x1 ^ ~x2) v (x2)
  const CnfFormula dnf = make_formula(2, {{1, -2}, {2}}, FormulaKind::Dnf);
  CHECK_FALSE(eval_formula(dnf, Assignment{0b00, 2}));
  CHECK(eval_formula(dnf, Assignment{0b01, 2}));
  CHECK(eval_formula(dnf, Assignment{0b10, 2}));
  CHECK(eval_formula(dnf, Assignment{0b11, 2}));
}

TEST_CASE("assignment bit convention: variable 1 is the most significant bit") {
  const Assignment a{0b10, 2};
  CHECK(a.bit(1));
  CHECK_FALSE(a.bit(2));
}

TEST_CASE("eval_sector packs clause 1 into the most significant label bit") {
  const CnfFormula f = make_formula(2, {{1}, {2}});
  const SectorLabel l = eval_sector(f, Assignment{0b10, 2});
  CHECK(l.size == 2);
  CHECK(l.bit(1));
  CHECK_FALSE(l.bit(2));
  CHECK(l.to_string() == "10");
  CHECK_FALSE(l.all_ones());
  CHECK(eval_sector(f, Assignment{0b11, 2}).all_ones());
}

TEST_CASE("partition groups every assignment exactly once") {
  Rng rng(7);
  const CnfFormula f = testutil::random_cnf(rng, 4, 3);
  const auto part = partition(f);
  std::set<BasisIndex> seen;
  for (const auto& [label, members] : part) {
    for (const Assignment& a : members) {
      CHECK(eval_sector(f, a) == label);
      CHECK(seen.insert(a.bits).second);
    }
  }
  CHECK(seen.size() == 16);
  CHECK_THROWS_AS(partition(make_formula(21, {{1}}), 20), CapacityError);
}

TEST_CASE("compiled clause masks agree with direct evaluation") {
  Rng rng(99);
  for (int trial = 0; trial < 25; ++trial) {
    const int n = 1 + static_cast<int>(rng.uniform() * 5);
    const int N = 1 + static_cast<int>(rng.uniform() * 4);
    const FormulaKind kind = rng.uniform() < 0.5 ? FormulaKind::Cnf : FormulaKind::Dnf;
    CnfFormula f = testutil::random_cnf(rng, n, N);
    f.kind = kind;
    const auto compiled = compile_formula(f);
    for (BasisIndex x = 0; x < (BasisIndex{1} << n); ++x) {
      const std::uint32_t bits = eval_sector_bits(compiled, x);
      const SectorLabel direct = eval_sector(f, Assignment{x, n});
      REQUIRE(bits == direct.bits);
      for (int i = 0; i < N; ++i) {
        REQUIRE(compiled[static_cast<std::size_t>(i)].eval(x) ==
                eval_clause(f.clauses[static_cast<std::size_t>(i)], Assignment{x, n}, kind));
      }
    }
  }
}
