#include "dqnet/formula.hpp"

#include <algorithm>
#include <sstream>

#include "dqnet/errors.hpp"

namespace dqnet {

std::string SectorLabel::to_string() const {
  std::string s(static_cast<std::size_t>(size), '0');
  for (int i = 1; i <= size; ++i)
    if (bit(i)) s[static_cast<std::size_t>(i - 1)] = '1';
  return s;
}

namespace {

[[noreturn]] void parse_fail(int line, const std::string& msg) {
  throw ParseError("dimacs line " + std::to_string(line) + ": " + msg);
}

}  // namespace

CnfFormula parse_dimacs(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int line_no = 0;

  CnfFormula formula;
  bool header_seen = false;
  int declared_clauses = 0;
  Clause current;
  bool clause_open = false;
  int clause_start_line = 0;
  int clauses_read = 0;

  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok)) continue;          // blank line
    if (tok == "c") continue;            // comment
    if (tok.size() > 1 && tok[0] == 'c') continue;

    if (tok == "p") {
      if (header_seen) parse_fail(line_no, "duplicate header");
      std::string fmt;
      if (!(ls >> fmt)) parse_fail(line_no, "malformed header: missing format");
      if (fmt == "cnf")
        formula.kind = FormulaKind::Cnf;
      else if (fmt == "dnf")
        formula.kind = FormulaKind::Dnf;
      else
        parse_fail(line_no, "malformed header: unknown format '" + fmt + "'");
      if (!(ls >> formula.variable_count >> declared_clauses))
        parse_fail(line_no, "malformed header: expected variable and clause counts");
      if (formula.variable_count < 1)
        parse_fail(line_no, "variable count must be positive");
      if (declared_clauses < 1) parse_fail(line_no, "clause count must be positive");
      header_seen = true;
      continue;
    }

    if (!header_seen) parse_fail(line_no, "clause data before 'p' header");

    // Clause tokens; a clause may span lines and ends at a literal 0.
    ls.clear();
    ls.str(line);
    long lit;
    while (ls >> lit) {
      if (lit == 0) {
        if (!clause_open) parse_fail(line_no, "empty clause");
        formula.clauses.push_back(current);
        current.literals.clear();
        clause_open = false;
        ++clauses_read;
        if (clauses_read > declared_clauses)
          parse_fail(line_no, "more clauses than declared in header");
        continue;
      }
      const long var = lit < 0 ? -lit : lit;
      if (var > formula.variable_count)
        parse_fail(line_no, "literal " + std::to_string(lit) + " exceeds declared variable count " +
                                std::to_string(formula.variable_count));
      if (!clause_open) {
        clause_open = true;
        clause_start_line = line_no;
      }
      current.literals.push_back(Literal{static_cast<int>(var), lit < 0});
    }
    if (!ls.eof()) parse_fail(line_no, "unexpected token");
  }

  if (!header_seen) throw ParseError("dimacs: missing 'p cnf' header");
  if (clause_open)
    parse_fail(clause_start_line, "clause missing terminating 0");
  if (clauses_read != declared_clauses)
    throw ParseError("dimacs: header declares " + std::to_string(declared_clauses) +
                     " clauses but " + std::to_string(clauses_read) + " were read");
  return formula;
}

std::string emit_dimacs(const CnfFormula& formula) {
  std::ostringstream out;
  out << "p " << (formula.kind == FormulaKind::Cnf ? "cnf" : "dnf") << ' '
      << formula.variable_count << ' ' << formula.clauses.size() << '\n';
  for (const Clause& clause : formula.clauses) {
    for (const Literal& lit : clause.literals) out << (lit.negated ? -lit.var : lit.var) << ' ';
    out << "0\n";
  }
  return out.str();
}

std::optional<Clause> normalize_clause(const Clause& clause) {
  Clause result;
  for (const Literal& lit : clause.literals) {
    bool duplicate = false;
    for (const Literal& kept : result.literals) {
      if (kept.var == lit.var) {
        if (kept.negated != lit.negated) return std::nullopt;  // complementary pair
        duplicate = true;
        break;
      }
    }
    if (!duplicate) result.literals.push_back(lit);
  }
  return result;
}

NormalizeResult normalize_formula(const CnfFormula& formula) {
  NormalizeResult out;
  out.formula.variable_count = formula.variable_count;
  out.formula.kind = formula.kind;
  for (std::size_t i = 0; i < formula.clauses.size(); ++i) {
    std::optional<Clause> norm = normalize_clause(formula.clauses[i]);
    if (norm) {
      out.formula.clauses.push_back(std::move(*norm));
    } else {
      out.warnings.push_back("clause " + std::to_string(i + 1) + " contains a complementary pair; dropped (" +
                             (formula.kind == FormulaKind::Cnf ? "always true)" : "always false)"));
    }
  }
  return out;
}

std::pair<CnfFormula, ThreeCnfMapping> to_three_cnf(const CnfFormula& formula) {
  if (formula.kind != FormulaKind::Cnf)
    throw std::invalid_argument("to_three_cnf: input must be CNF");

  CnfFormula out;
  out.kind = FormulaKind::Cnf;
  ThreeCnfMapping mapping;
  mapping.original_variable_count = formula.variable_count;
  int next_var = formula.variable_count;

  for (std::size_t ci = 0; ci < formula.clauses.size(); ++ci) {
    const std::vector<Literal>& lits = formula.clauses[ci].literals;
    const std::size_t k = lits.size();
    if (k <= 3) {
      out.clauses.push_back(formula.clauses[ci]);
      continue;
    }
    // (l1 v l2 v z1) (¬z1 v l3 v z2) ... (¬z_{k-3} v l_{k-1} v l_k)
    int prev_aux = ++next_var;
    mapping.auxiliaries.push_back({prev_aux, static_cast<int>(ci)});
    out.clauses.push_back(Clause{{lits[0], lits[1], Literal{prev_aux, false}}});
    for (std::size_t j = 2; j + 2 < k; ++j) {
      int aux = ++next_var;
      mapping.auxiliaries.push_back({aux, static_cast<int>(ci)});
      out.clauses.push_back(Clause{{Literal{prev_aux, true}, lits[j], Literal{aux, false}}});
      prev_aux = aux;
    }
    out.clauses.push_back(Clause{{Literal{prev_aux, true}, lits[k - 2], lits[k - 1]}});
  }

  out.variable_count = next_var;
  mapping.total_variable_count = next_var;
  return {std::move(out), std::move(mapping)};
}

bool eval_clause(const Clause& clause, Assignment x, FormulaKind kind) {
  if (kind == FormulaKind::Cnf) {
    for (const Literal& lit : clause.literals)
      if (x.bit(lit.var) != lit.negated) return true;
    return false;
  }
  for (const Literal& lit : clause.literals)
    if (x.bit(lit.var) == lit.negated) return false;
  return true;
}

bool eval_formula(const CnfFormula& formula, Assignment x) {
  if (formula.kind == FormulaKind::Cnf) {
    for (const Clause& clause : formula.clauses)
      if (!eval_clause(clause, x, formula.kind)) return false;
    return true;
  }
  for (const Clause& clause : formula.clauses)
    if (eval_clause(clause, x, formula.kind)) return true;
  return false;
}

SectorLabel eval_sector(const CnfFormula& formula, Assignment x) {
  SectorLabel label;
  label.size = formula.clause_count();
  for (int i = 0; i < label.size; ++i)
    if (eval_clause(formula.clauses[static_cast<std::size_t>(i)], x, formula.kind))
      label.bits |= 1u << (label.size - 1 - i);
  return label;
}

ClauseEval compile_clause(const Clause& clause, int n, FormulaKind kind) {
  ClauseEval ce;
  ce.conjunction = (kind == FormulaKind::Dnf);
  for (const Literal& lit : clause.literals) {
    const BasisIndex m = 1u << (n - lit.var);
    ce.mask |= m;
    if (lit.negated) ce.flip |= m;
  }
  return ce;
}

std::vector<ClauseEval> compile_formula(const CnfFormula& formula) {
  std::vector<ClauseEval> out;
  out.reserve(formula.clauses.size());
  for (const Clause& clause : formula.clauses)
    out.push_back(compile_clause(clause, formula.variable_count, formula.kind));
  return out;
}

std::uint32_t eval_sector_bits(const std::vector<ClauseEval>& compiled, BasisIndex x) {
  const int N = static_cast<int>(compiled.size());
  std::uint32_t bits = 0;
  for (int i = 0; i < N; ++i)
    if (compiled[static_cast<std::size_t>(i)].eval(x)) bits |= 1u << (N - 1 - i);
  return bits;
}

std::map<SectorLabel, std::vector<Assignment>> partition(const CnfFormula& formula,
                                                         int max_variables) {
  const int n = formula.variable_count;
  if (n > max_variables || n > 30)
    throw CapacityError("partition: " + std::to_string(n) + " variables exceeds brute-force cap " +
                        std::to_string(std::min(max_variables, 30)));
  if (formula.clause_count() > 32)
    throw CapacityError("partition: more than 32 clauses cannot be packed into a sector label");

  const std::vector<ClauseEval> compiled = compile_formula(formula);
  const int N = formula.clause_count();
  std::map<SectorLabel, std::vector<Assignment>> sectors;
  const BasisIndex total = BasisIndex{1} << n;
  for (BasisIndex x = 0; x < total; ++x) {
    SectorLabel label{eval_sector_bits(compiled, x), N};
    sectors[label].push_back(Assignment{x, n});
  }
  return sectors;
}

}  // namespace dqnet
