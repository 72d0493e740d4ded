#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace dqnet {

/// Packed classical assignment / computational-basis index.
/// Variable 1 is the most significant of the n used bits, so the bit of
/// variable v inside an n-variable assignment sits at weight 2^(n-v).
using BasisIndex = std::uint32_t;

/// One signed variable: `negated == false` means the literal x_var,
/// `negated == true` means ¬x_var. Variables are 1-based (DIMACS style).
struct Literal {
  int var = 0;
  bool negated = false;

  friend bool operator==(const Literal&, const Literal&) = default;
  friend auto operator<=>(const Literal&, const Literal&) = default;
};

/// A clause is an ordered list of literals over distinct variables.
/// In a CNF formula a clause is a disjunction; in a DNF formula it is a
/// conjunction. Length is 1..3 once normalized; the parser accepts longer
/// clauses so they can be fed to to_three_cnf().
struct Clause {
  std::vector<Literal> literals;

  friend bool operator==(const Clause&, const Clause&) = default;
};

enum class FormulaKind { Cnf, Dnf };

/// Boolean formula in clause form. `variable_count` = n, clauses.size() = N.
struct CnfFormula {
  int variable_count = 0;
  std::vector<Clause> clauses;
  FormulaKind kind = FormulaKind::Cnf;

  int clause_count() const { return static_cast<int>(clauses.size()); }

  friend bool operator==(const CnfFormula&, const CnfFormula&) = default;
};

/// Classical assignment with explicit width. bit(v) is the value of x_v.
struct Assignment {
  BasisIndex bits = 0;
  int n = 0;

  bool bit(int var) const { return (bits >> (n - var)) & 1u; }

  friend bool operator==(const Assignment&, const Assignment&) = default;
  friend auto operator<=>(const Assignment&, const Assignment&) = default;
};

/// Per-clause evaluation vector (c_1, ..., c_N) packed with c_1 as the most
/// significant of the N used bits. This is the ancilla readout pattern that
/// labels a decoherence-free sector.
struct SectorLabel {
  std::uint32_t bits = 0;
  int size = 0;

  bool bit(int clause_index) const {  // 1-based
    return (bits >> (size - clause_index)) & 1u;
  }
  bool all_ones() const {
    const std::uint32_t full = size >= 32 ? ~0u : (1u << size) - 1u;
    return bits == full;
  }
  std::string to_string() const;

  friend bool operator==(const SectorLabel&, const SectorLabel&) = default;
  friend auto operator<=>(const SectorLabel&, const SectorLabel&) = default;
};

/// Bookkeeping produced by to_three_cnf(): which variables are auxiliary
/// and which source clause each one was introduced for.
struct ThreeCnfMapping {
  int original_variable_count = 0;
  int total_variable_count = 0;
  struct Auxiliary {
    int variable = 0;      // index of the fresh variable
    int source_clause = 0; // 0-based index into the input clause list
  };
  std::vector<Auxiliary> auxiliaries;
};

struct NormalizeResult {
  CnfFormula formula;
  std::vector<std::string> warnings;  // one entry per dropped clause
};

/// Parse DIMACS text ("p cnf n m" header; "p dnf n m" is accepted as the
/// dual clause-list form). Throws ParseError with a line number on
/// malformed input.
CnfFormula parse_dimacs(const std::string& text);

/// Serialize back to DIMACS. parse_dimacs(emit_dimacs(f)) == f for
/// normalized formulas.
std::string emit_dimacs(const CnfFormula& formula);

/// Merge duplicate literals; return std::nullopt when the clause contains a
/// complementary pair (a CNF tautology / DNF contradiction, which is
/// dropped from its formula without changing semantics).
std::optional<Clause> normalize_clause(const Clause& clause);

/// Normalize every clause, dropping degenerate ones with a warning.
NormalizeResult normalize_formula(const CnfFormula& formula);

/// Split clauses longer than three literals into an equisatisfiable chain
/// of 3-literal clauses using fresh auxiliary variables. CNF only.
std::pair<CnfFormula, ThreeCnfMapping> to_three_cnf(const CnfFormula& formula);

/// Clause truth value on a classical assignment (disjunction for CNF
/// clauses, conjunction for DNF clauses).
bool eval_clause(const Clause& clause, Assignment x, FormulaKind kind = FormulaKind::Cnf);

/// Whole-formula truth value: AND of clauses for CNF, OR for DNF.
bool eval_formula(const CnfFormula& formula, Assignment x);

/// The vector of per-clause values (c_1, ..., c_N) on assignment x.
SectorLabel eval_sector(const CnfFormula& formula, Assignment x);

/// Group all 2^n assignments by their sector label. Exhaustive, so n is
/// capped (default 20); throws CapacityError beyond the cap.
std::map<SectorLabel, std::vector<Assignment>> partition(const CnfFormula& formula,
                                                         int max_variables = 20);

/// Precompiled clause masks for hot evaluation loops:
/// a CNF clause is satisfied iff ((x ^ flip) & mask) != 0,
/// a DNF clause iff ((x ^ flip) & mask) == mask.
struct ClauseEval {
  BasisIndex mask = 0;
  BasisIndex flip = 0;
  bool conjunction = false;

  bool eval(BasisIndex x) const {
    const BasisIndex hit = (x ^ flip) & mask;
    return conjunction ? hit == mask : hit != 0;
  }
};

ClauseEval compile_clause(const Clause& clause, int n, FormulaKind kind);
std::vector<ClauseEval> compile_formula(const CnfFormula& formula);

/// eval_sector via precompiled masks (c_1 in the most significant of N bits).
std::uint32_t eval_sector_bits(const std::vector<ClauseEval>& compiled, BasisIndex x);

}  // namespace dqnet
