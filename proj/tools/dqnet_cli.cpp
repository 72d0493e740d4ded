// dqnet: compile Boolean formulas into damped-ancilla clause networks,
// evolve states through the closed-form channel, classify / learn / prepare,
// and verify the analytic engine against the brute-force integrator.
//
// Exit codes: 0 ok; 1 verification or runtime failure; 2 unparsable input;
// 3 capacity exceeded; 4 promise violation; 5 learner did not converge;
// 6 zero-probability post-selection.

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dqnet/apps.hpp"
#include "dqnet/classify.hpp"
#include "dqnet/dynamics.hpp"
#include "dqnet/errors.hpp"
#include "dqnet/formula.hpp"
#include "dqnet/learn.hpp"
#include "dqnet/oracle.hpp"
#include "dqnet/qstate.hpp"

namespace {

using namespace dqnet;

// ---------------------------------------------------------------------------
// formatting: 12 significant digits, '.' decimal separator, '\n' endings
// ---------------------------------------------------------------------------

std::string num(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string time_str(double t) { return std::isinf(t) ? "inf" : num(t); }

double parse_time(const std::string& text) {
  std::string s = text;
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (s == "inf" || s == "infinity") return std::numeric_limits<double>::infinity();
  try {
    std::size_t used = 0;
    const double t = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    if (!(t >= 0.0)) throw std::invalid_argument(s);
    return t;
  } catch (const std::exception&) {
    throw ParseError("--time: expected a nonnegative number or 'inf', got '" + text + "'");
  }
}

std::string json_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

// ---------------------------------------------------------------------------
// file plumbing
// ---------------------------------------------------------------------------

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_bytes(const std::string& path, const std::string& bytes) {
  if (path.empty()) {
    std::fwrite(bytes.data(), 1, bytes.size(), stdout);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

CnfFormula load_formula(const std::string& path) {
  if (path.empty()) throw ParseError("--formula is required for this subcommand");
  const NormalizeResult norm = normalize_formula(parse_dimacs(read_text_file(path)));
  for (const std::string& w : norm.warnings) std::cerr << "note: " << w << "\n";
  return norm.formula;
}

PureState load_state(const std::string& path) {
  if (path.empty()) throw ParseError("--state is required for this subcommand");
  return read_state_file(path);
}

// ---------------------------------------------------------------------------
// shared options
// ---------------------------------------------------------------------------

struct Opts {
  std::string formula_path;
  std::string state_path;
  std::string output_path;
  std::string series_path;
  std::string target_path;
  double gamma = 1.0;
  std::string time_text;  // empty = subcommand default
  int shots = 0;
  std::uint64_t seed = 1;
  std::string mode = "standard";
  std::string format = "csv";
  int max_qubits = kMaxDenseQubits;
  bool noisy = false;
  bool passive = false;
  int vars = 0;
  int samples = 512;
  int instances = 20;
  bool inject_sign_bug = false;
};

void add_common(CLI::App* cmd, Opts& o) {
  cmd->add_option("--formula", o.formula_path, "DIMACS formula file (p cnf / p dnf)");
  cmd->add_option("--state", o.state_path, "JSON state file");
  cmd->add_option("--gamma", o.gamma, "Damping rate gamma (default 1)");
  cmd->add_option("--time", o.time_text, "Evolution time in units of 1/gamma, or 'inf'");
  cmd->add_option("--shots", o.shots, "Sampled readout rounds (0 = exact only)");
  cmd->add_option("--seed", o.seed, "Deterministic RNG seed");
  cmd->add_option("--mode", o.mode, "Network mode: standard | pac")
      ->check(CLI::IsMember({"standard", "pac"}));
  cmd->add_option("--output", o.output_path, "Output file (default: stdout)");
  cmd->add_option("--format", o.format, "Output format: csv | json")
      ->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--max-qubits", o.max_qubits, "Dense-allocation cap (total qubits)");
}

Mode parse_mode(const std::string& mode) {
  return mode == "pac" ? Mode::Pac : Mode::Standard;
}

double effective_time(const Opts& o, double fallback) {
  return o.time_text.empty() ? fallback : parse_time(o.time_text);
}

// ---------------------------------------------------------------------------
// classify
// ---------------------------------------------------------------------------

int cmd_classify(const Opts& o) {
  const CnfFormula formula = load_formula(o.formula_path);
  const PureState psi = load_state(o.state_path);
  const double t = effective_time(o, std::numeric_limits<double>::infinity());
  NetworkConfig net{formula, o.gamma, parse_mode(o.mode)};

  const ClassificationResult exact = classify_exact(formula, psi);
  std::optional<ClassificationResult> sampled;
  if (o.shots > 0) sampled = classify_sampled(net, psi, t, o.shots, o.seed);
  std::optional<PassiveReadout> passive;
  if (o.passive) passive = classify_passive(net, psi, t, o.seed);

  const int N = formula.clause_count();
  std::string out;
  if (o.format == "csv") {
    out += "# t in units of 1/gamma; t = " + time_str(t) + ", gamma = " + num(o.gamma) +
           ", seed = " + std::to_string(o.seed) + ", shots = " + std::to_string(o.shots) + "\n";
    out += "quantity,key,value,stderr\n";
    for (const auto& [label, w] : exact.sector_weights)
      out += "sector_weight," + label.to_string() + "," + num(w) + ",\n";
    for (int i = 0; i < N; ++i)
      out += "c_tilde," + std::to_string(i + 1) + "," +
             num(exact.c_tilde[static_cast<std::size_t>(i)]) + ",\n";
    out += "c_hat_1,," + num(exact.c_hat_1) + ",\n";
    out += "c_hat_2,," + num(exact.c_hat_2) + ",\n";
    if (sampled) {
      for (const auto& [label, w] : sampled->sector_weights)
        out += "sampled_sector_weight," + label.to_string() + "," + num(w) + ",\n";
      for (int i = 0; i < N; ++i)
        out += "sampled_c_tilde," + std::to_string(i + 1) + "," +
               num(sampled->c_tilde[static_cast<std::size_t>(i)]) + "," +
               num(sampled->c_tilde_stderr[static_cast<std::size_t>(i)]) + "\n";
      out += "sampled_c_hat_1,," + num(sampled->c_hat_1) + "," + num(sampled->c_hat_1_stderr) +
             "\n";
      out += "sampled_c_hat_2,," + num(sampled->c_hat_2) + ",\n";
    }
    if (passive) {
      out += "passive_measured," + passive->measured.to_string() + ",,\n";
      out += "passive_fidelity,," + num(passive->input_fidelity) + ",\n";
    }
  } else {
    out += "{\n  \"t\": \"" + time_str(t) + "\",\n  \"gamma\": " + num(o.gamma) +
           ",\n  \"seed\": " + std::to_string(o.seed) +
           ",\n  \"shots\": " + std::to_string(o.shots) + ",\n";
    out += "  \"sector_weights\": {";
    bool first = true;
    for (const auto& [label, w] : exact.sector_weights) {
      out += std::string(first ? "" : ", ") + "\"" + label.to_string() + "\": " + num(w);
      first = false;
    }
    out += "},\n  \"c_tilde\": [";
    for (int i = 0; i < N; ++i)
      out += std::string(i ? ", " : "") + num(exact.c_tilde[static_cast<std::size_t>(i)]);
    out += "],\n  \"c_hat_1\": " + num(exact.c_hat_1) +
           ",\n  \"c_hat_2\": " + num(exact.c_hat_2);
    if (sampled) {
      out += ",\n  \"sampled\": {\n    \"sector_weights\": {";
      first = true;
      for (const auto& [label, w] : sampled->sector_weights) {
        out += std::string(first ? "" : ", ") + "\"" + label.to_string() + "\": " + num(w);
        first = false;
      }
      out += "},\n    \"c_tilde\": [";
      for (int i = 0; i < N; ++i)
        out += std::string(i ? ", " : "") + num(sampled->c_tilde[static_cast<std::size_t>(i)]);
      out += "],\n    \"c_tilde_stderr\": [";
      for (int i = 0; i < N; ++i)
        out += std::string(i ? ", " : "") +
               num(sampled->c_tilde_stderr[static_cast<std::size_t>(i)]);
      out += "],\n    \"c_hat_1\": " + num(sampled->c_hat_1) +
             ",\n    \"c_hat_1_stderr\": " + num(sampled->c_hat_1_stderr) +
             ",\n    \"c_hat_2\": " + num(sampled->c_hat_2) + "\n  }";
    }
    if (passive) {
      out += ",\n  \"passive\": {\"measured\": \"" + passive->measured.to_string() +
             "\", \"fidelity\": " + num(passive->input_fidelity) + "}";
    }
    out += "\n}\n";
  }
  write_bytes(o.output_path, out);
  return 0;
}

// ---------------------------------------------------------------------------
// learn
// ---------------------------------------------------------------------------

int cmd_learn(const Opts& o) {
  if (o.target_path.empty()) throw ParseError("--target is required for learn");
  if (o.vars < 1) throw ParseError("--vars is required for learn (number of variables)");
  const Conjunction target = parse_conjunction(read_text_file(o.target_path), o.vars);

  ConjunctionSampleStream::Options sopt;
  sopt.positive_bias = 0.7;
  sopt.superposed_fraction = 0.25;
  ConjunctionSampleStream stream(target, sopt);

  TrainOptions topt;
  topt.max_samples = o.samples;
  topt.gamma = o.gamma;
  if (o.noisy) {
    topt.t = effective_time(o, 3.0 / o.gamma);
  } else {
    topt.t = effective_time(o, std::numeric_limits<double>::infinity());
  }

  const TrainResult result = train(o.vars, stream, topt, o.seed);
  const bool ok = result.converged && result.update_count <= 2 * o.vars;

  std::string out;
  if (o.format == "csv") {
    out += "# t in units of 1/gamma; t = " + time_str(topt.t) + ", gamma = " + num(o.gamma) +
           ", n = " + std::to_string(o.vars) + ", seed = " + std::to_string(o.seed) + "\n";
    out += "step,label,measured,literals_removed,remaining\n";
    for (const TrainLogEntry& e : result.log)
      out += std::to_string(e.step) + "," + std::to_string(e.label ? 1 : 0) + "," +
             e.measured.to_string() + "," + std::to_string(e.literals_removed) + "," +
             std::to_string(e.remaining) + "\n";
    out += "# hypothesis = " + emit_conjunction(result.hypothesis) + "\n";
    out += "# update_count = " + std::to_string(result.update_count) + "\n";
    out += "# samples_used = " + std::to_string(result.samples_used) + "\n";
    out += "# converged = " + std::to_string(result.converged ? 1 : 0) + "\n";
  } else {
    out += "{\n  \"n\": " + std::to_string(o.vars) + ",\n  \"log\": [\n";
    for (std::size_t i = 0; i < result.log.size(); ++i) {
      const TrainLogEntry& e = result.log[i];
      out += std::string("    {\"step\": ") + std::to_string(e.step) +
             ", \"label\": " + (e.label ? "1" : "0") + ", \"measured\": \"" +
             e.measured.to_string() + "\", \"literals_removed\": " +
             std::to_string(e.literals_removed) +
             ", \"remaining\": " + std::to_string(e.remaining) + "}" +
             (i + 1 < result.log.size() ? ",\n" : "\n");
    }
    out += "  ],\n  \"hypothesis\": \"" + json_escape(emit_conjunction(result.hypothesis)) +
           "\",\n  \"update_count\": " + std::to_string(result.update_count) +
           ",\n  \"samples_used\": " + std::to_string(result.samples_used) +
           ",\n  \"converged\": " + (result.converged ? "true" : "false") + "\n}\n";
  }
  write_bytes(o.output_path, out);
  return ok ? 0 : 5;
}

// ---------------------------------------------------------------------------
// prep bell | pac | sat
// ---------------------------------------------------------------------------

std::string meta_block(const Opts& o, const std::vector<std::pair<std::string, std::string>>& kv,
                       bool quote_all = false) {
  std::string out;
  if (o.format == "csv") {
    out += "# t in units of 1/gamma\n";
    out += "key,value\n";
    for (const auto& [k, v] : kv) out += k + "," + v + "\n";
  } else {
    out += "{";
    bool first = true;
    for (const auto& [k, v] : kv) {
      const bool is_number = !quote_all && !v.empty() &&
                             (std::isdigit(static_cast<unsigned char>(v[0])) || v[0] == '-' ||
                              v[0] == '+') && v != "inf";
      out += std::string(first ? "\n  " : ",\n  ") + "\"" + k + "\": ";
      out += is_number ? v : "\"" + json_escape(v) + "\"";
      first = false;
    }
    out += "\n}\n";
  }
  return out;
}

int cmd_prep_bell(const Opts& o) {
  const double t = effective_time(o, std::numeric_limits<double>::infinity());
  const BellPrep prep = prep_bell(o.gamma, t);

  if (!o.series_path.empty()) {
    std::vector<double> grid;
    for (int k = 1; k <= 20; ++k) grid.push_back(0.5 * k / o.gamma);
    std::string csv = "t_in_units_of_inverse_gamma,distance,success_probability\n";
    for (const BellPoint& p : bell_series(o.gamma, grid))
      csv += num(p.t * o.gamma) + "," + num(p.distance) + "," + num(p.probability) + "\n";
    write_bytes(o.series_path, csv);
  }
  if (!o.output_path.empty()) write_state_file(o.output_path, prep.state);

  write_bytes("", meta_block(o, {{"prep", "bell"},
                                 {"t", time_str(t)},
                                 {"gamma", num(o.gamma)},
                                 {"seed", std::to_string(o.seed)},
                                 {"success_probability", num(prep.probability)},
                                 {"distance_to_target", num(prep.distance)}}));
  return 0;
}

int cmd_prep_pac(const Opts& o) {
  const CnfFormula formula = load_formula(o.formula_path);
  const double t = effective_time(o, std::numeric_limits<double>::infinity());
  const PureState system = o.state_path.empty()
                               ? PureState::uniform_superposition(formula.variable_count)
                               : load_state(o.state_path);
  const PacPrep prep = prep_pac(formula, system, o.gamma, t);

  std::vector<std::pair<std::string, std::string>> kv = {
      {"prep", "pac"},
      {"t", time_str(t)},
      {"gamma", num(o.gamma)},
      {"seed", std::to_string(o.seed)},
      {"variables", std::to_string(formula.variable_count)},
      {"clauses", std::to_string(formula.clause_count())},
      {"pure", prep.pure ? "1" : "0"}};
  const int total = formula.variable_count + formula.clause_count();
  if (total <= std::min(o.max_qubits, kMaxDenseQubits)) {
    const DenseDensity rho = densify(prep.joint);
    kv.emplace_back("fidelity_to_target", num(fidelity(pac_target(formula, system), rho)));
    kv.emplace_back("purity", num(purity(rho)));
  }
  if (prep.pure && !o.output_path.empty()) write_state_file(o.output_path, *prep.pure);

  write_bytes("", meta_block(o, kv));
  return 0;
}

int cmd_prep_sat(const Opts& o) {
  const CnfFormula formula = load_formula(o.formula_path);
  const double t = effective_time(o, std::numeric_limits<double>::infinity());
  const SatPrep prep = sat_superposition(formula, o.gamma, t);

  write_bytes("", meta_block(o, {{"prep", "sat"},
                                 {"t", time_str(t)},
                                 {"gamma", num(o.gamma)},
                                 {"seed", std::to_string(o.seed)},
                                 {"satisfying_count", std::to_string(prep.satisfying_count)},
                                 {"success_probability", num(prep.probability)}}));
  if (!prep.state) {
    std::cerr << "post-selection probability is zero (unsatisfiable at t = inf)\n";
    return 6;
  }
  if (!o.output_path.empty()) write_state_file(o.output_path, *prep.state);
  return 0;
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

struct VerifyReport {
  int passed = 0;
  int failed = 0;
  std::string bound_rows;  // optional CSV of (t, bound, measured)

  void check(bool ok, const std::string& name, const std::string& detail) {
    if (ok) {
      ++passed;
      std::cout << "PASS " << name << " " << detail << "\n";
    } else {
      ++failed;
      std::cout << "FAIL " << name << " " << detail << "\n";
    }
  }
};

// Random small instance generator for the verify suite.
struct RandomInstance {
  CnfFormula formula;
  PureState psi;
};

RandomInstance random_instance(Rng& rng, int max_total_qubits) {
  const int max_n = std::max(1, std::min(4, max_total_qubits - 1));
  const int n = 1 + static_cast<int>(rng.uniform() * max_n);
  const int max_N = std::max(1, std::min(3, max_total_qubits - n));
  const int N = 1 + static_cast<int>(rng.uniform() * max_N);

  CnfFormula f;
  f.variable_count = n;
  f.kind = FormulaKind::Cnf;
  for (int c = 0; c < N; ++c) {
    const int len = 1 + static_cast<int>(rng.uniform() * std::min(3, n));
    std::vector<int> vars;
    for (int v = 1; v <= n; ++v) vars.push_back(v);
    Clause cl;
    for (int l = 0; l < len; ++l) {
      const std::size_t pick = static_cast<std::size_t>(rng.uniform() * vars.size());
      cl.literals.push_back(Literal{vars[pick], rng.uniform() < 0.5});
      vars.erase(vars.begin() + static_cast<std::ptrdiff_t>(pick));
    }
    f.clauses.push_back(cl);
  }

  std::vector<std::pair<BasisIndex, Complex>> amps;
  const BasisIndex dim = BasisIndex{1} << n;
  for (BasisIndex x = 0; x < dim; ++x) {
    if (rng.uniform() < 0.6) {
      amps.emplace_back(x, Complex(2.0 * rng.uniform() - 1.0, 2.0 * rng.uniform() - 1.0));
    }
  }
  if (amps.empty()) amps.emplace_back(0u, Complex(1.0, 0.0));
  PureState psi(n, std::move(amps));
  psi.normalize();
  return {std::move(f), std::move(psi)};
}

// Assemble the analytic joint state from a factor table (so the verify suite
// can optionally mutate the table to prove it detects a broken channel).
JointState assemble_joint(const CnfFormula& formula, const PureState& psi,
                          const std::array<AncillaFactor, 4>& table) {
  const int N = formula.clause_count();
  const std::vector<ClauseEval> compiled = compile_formula(formula);
  const auto& amps = psi.amplitudes();
  JointState joint(psi.qubits(), N);
  for (const auto& [x, ax] : amps) {
    const std::uint32_t lx = eval_sector_bits(compiled, x);
    for (const auto& [y, ay] : amps) {
      const std::uint32_t ly = eval_sector_bits(compiled, y);
      std::vector<AncillaFactor> factors;
      factors.reserve(static_cast<std::size_t>(N));
      for (int i = 0; i < N; ++i) {
        const int cx = (lx >> (N - 1 - i)) & 1u;
        const int cy = (ly >> (N - 1 - i)) & 1u;
        factors.push_back(table[static_cast<std::size_t>((cx << 1) | cy)]);
      }
      joint.add_term(x, y, ax * std::conj(ay), std::move(factors));
    }
  }
  return joint;
}

std::array<AncillaFactor, 4> verify_table(const NetworkConfig& net, double t, bool mutate) {
  std::array<AncillaFactor, 4> table = case_factor_table(net, t);
  if (mutate) {
    // The deliberate fault: wrong sign on the surviving cross-sector entry.
    table[1] = -table[1];
    table[2] = -table[2];
  }
  return table;
}

int cmd_verify(const Opts& o) {
  VerifyReport rep;
  const int cap = std::min(o.max_qubits, kMaxOracleQubits);

  // 1. One-clause factor grid against the integrator, all four clause cases.
  {
    CnfFormula f;
    f.variable_count = 1;
    f.clauses = {Clause{{Literal{1, false}}}};
    NetworkConfig net{f, o.gamma, Mode::Standard};
    const PureState plus = PureState::uniform_superposition(1);
    const DenseDensity rho0 = dense_initial_state(net, plus);
    const std::vector<double> grid = {0.1 / o.gamma, 1.0 / o.gamma, 5.0 / o.gamma};
    const std::vector<DenseDensity> snaps = integrate_with_snapshots(net, rho0, grid);
    for (std::size_t k = 0; k < grid.size(); ++k) {
      const auto table = verify_table(net, grid[k], o.inject_sign_bug);
      double worst = 0.0;
      // system block (x, y) carries factor case (C(x), C(y)) = (x, y), scaled 1/2
      for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y) {
          AncillaFactor block;
          for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b) block(a, b) = snaps[k](2 * x + a, 2 * y + b);
          const AncillaFactor pred = 0.5 * table[static_cast<std::size_t>((x << 1) | y)];
          worst = std::max(worst, (block - pred).cwiseAbs().maxCoeff());
        }
      rep.check(worst <= 1e-8, "factor_grid",
                "t=" + num(grid[k] * o.gamma) + " max_err=" + num(worst));
    }
  }

  Rng rng(o.seed);
  const std::vector<double> tgrid = {0.1, 0.5, 1.0, 2.0, 5.0};

  for (int inst = 0; inst < o.instances; ++inst) {
    const RandomInstance ri = random_instance(rng, cap);
    NetworkConfig net{ri.formula, o.gamma, Mode::Standard};
    const std::string tag = "instance=" + std::to_string(inst) +
                            " n=" + std::to_string(ri.formula.variable_count) +
                            " N=" + std::to_string(ri.formula.clause_count());

    // 2. analytic channel vs integrator across the time grid
    std::vector<double> times;
    for (double t : tgrid) times.push_back(t / o.gamma);
    const DenseDensity rho0 = dense_initial_state(net, ri.psi);
    const std::vector<DenseDensity> snaps = integrate_with_snapshots(net, rho0, times);
    double worst = 0.0;
    double worst_t = times[0];
    for (std::size_t k = 0; k < times.size(); ++k) {
      const DenseDensity analytic =
          densify(assemble_joint(ri.formula, ri.psi, verify_table(net, times[k], o.inject_sign_bug)));
      const double d = trace_norm_distance(analytic, snaps[k]);
      if (d > worst) {
        worst = d;
        worst_t = times[k];
      }
    }
    rep.check(worst <= 1e-6, "channel_vs_oracle",
              tag + " worst_t=" + num(worst_t * o.gamma) + " distance=" + num(worst));

    // 3. fixed point at t = 50/gamma (two-stage integration)
    {
      const DenseDensity mid = integrate_master_equation(net, rho0, 5.0 / o.gamma);
      const DenseDensity late =
          integrate_master_equation(net, mid, 45.0 / o.gamma, 0.025 / o.gamma);
      const DenseDensity target =
          fixed_point_projection(ri.formula, dense_from_pure(ri.psi));
      const double d = trace_norm_distance(late, target);
      rep.check(d <= 1e-6, "fixed_point", tag + " t=50 distance=" + num(d));
    }

    // 4. convergence bounds at t = 2/gamma
    {
      const double t = 2.0 / o.gamma;
      const DenseDensity evolved = densify(evolve(net, ri.psi, t));
      const DenseDensity target = fixed_point_projection(ri.formula, dense_from_pure(ri.psi));
      const double measured = trace_norm_distance(evolved, target);
      const double bound = convergence_bound(net, ri.psi, t);
      rep.check(measured <= bound + 1e-10, "convergence_bound",
                tag + " t=" + num(t * o.gamma) + " measured=" + num(measured) +
                    " bound=" + num(bound));
      rep.bound_rows += num(t * o.gamma) + "," + num(bound) + "," + num(measured) + "\n";
    }
  }

  if (!o.output_path.empty()) {
    write_bytes(o.output_path, "t,bound,measured\n" + rep.bound_rows);
  }
  std::cout << "SUMMARY pass=" << rep.passed << " fail=" << rep.failed << "\n";
  return rep.failed == 0 ? 0 : 1;
}

int run_guarded(const std::function<int()>& body) {
  try {
    return body();
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const CapacityError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const PromiseViolation& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dqnet: damped-ancilla clause networks for Boolean formulas"};
  app.require_subcommand(1);
  Opts o;

  CLI::App* classify = app.add_subcommand("classify", "Sector readout of a state");
  add_common(classify, o);
  classify->add_flag("--passive", o.passive,
                     "Passive readout (state must sit inside a single sector)");

  CLI::App* learn = app.add_subcommand("learn", "Learn a conjunction from labeled samples");
  add_common(learn, o);
  learn->add_option("--target", o.target_path, "Target conjunction file (e.g. \"1 -3\")");
  learn->add_option("--vars", o.vars, "Number of variables n");
  learn->add_option("--samples", o.samples, "Sample budget (default 512)");
  learn->add_flag("--noisy", o.noisy, "Finite-time readout (uses --time, default 3/gamma)");

  CLI::App* prep = app.add_subcommand("prep", "Prepare a state by post-selection");
  prep->require_subcommand(1);
  CLI::App* bell = prep->add_subcommand("bell", "Distill (|00>+|11>)/sqrt(2)");
  add_common(bell, o);
  bell->add_option("--series", o.series_path, "Write the distance-series CSV here");
  CLI::App* pac = prep->add_subcommand("pac", "Prepare labeled example states");
  add_common(pac, o);
  CLI::App* sat = prep->add_subcommand("sat", "Superpose satisfying assignments");
  add_common(sat, o);

  CLI::App* verify = app.add_subcommand("verify", "Check analytics against the integrator");
  add_common(verify, o);
  verify->add_option("--instances", o.instances, "Random instances in the suite (default 20)");
  verify->add_flag("--inject-factor-sign-bug", o.inject_sign_bug,
                   "Fault-injection fixture: corrupt a channel factor sign")
      ->group("");  // hidden

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (classify->parsed()) return run_guarded([&] { return cmd_classify(o); });
  if (learn->parsed()) return run_guarded([&] { return cmd_learn(o); });
  if (prep->parsed()) {
    if (bell->parsed()) return run_guarded([&] { return cmd_prep_bell(o); });
    if (pac->parsed()) return run_guarded([&] { return cmd_prep_pac(o); });
    if (sat->parsed()) return run_guarded([&] { return cmd_prep_sat(o); });
  }
  if (verify->parsed()) return run_guarded([&] { return cmd_verify(o); });
  return 2;
}
