#include "dqnet/qstate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "dqnet/errors.hpp"

namespace dqnet {

namespace {

std::string fmt_double(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void check_dense_capacity(int total_qubits, const char* op) {
  if (total_qubits > kMaxDenseQubits)
    throw CapacityError(std::string(op) + ": " + std::to_string(total_qubits) +
                        " total qubits exceeds the dense cap of " +
                        std::to_string(kMaxDenseQubits));
}

}  // namespace

// ---------------------------------------------------------------------------
// PureState

PureState::PureState(int n, std::vector<std::pair<BasisIndex, Complex>> amplitudes)
    : n_(n), amps_(std::move(amplitudes)) {
  if (n < 1 || n > 24)
    throw CapacityError("PureState: qubit count " + std::to_string(n) + " outside [1, 24]");
  std::sort(amps_.begin(), amps_.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  const BasisIndex limit = BasisIndex{1} << n;
  BasisIndex prev = 0;
  bool first = true;
  for (const auto& [idx, amp] : amps_) {
    (void)amp;
    if (idx >= limit)
      throw std::invalid_argument("PureState: basis index out of range for qubit count");
    if (!first && idx == prev) throw std::invalid_argument("PureState: duplicate basis index");
    prev = idx;
    first = false;
  }
}

PureState PureState::basis_state(int n, BasisIndex bits) {
  return PureState(n, {{bits, Complex{1.0, 0.0}}});
}

PureState PureState::uniform_superposition(int n) {
  if (n < 1 || n > 24)
    throw CapacityError("uniform_superposition: n outside [1, 24]");
  const BasisIndex total = BasisIndex{1} << n;
  const double amp = std::pow(0.5, 0.5 * n);
  std::vector<std::pair<BasisIndex, Complex>> amps;
  amps.reserve(total);
  for (BasisIndex x = 0; x < total; ++x) amps.emplace_back(x, Complex{amp, 0.0});
  return PureState(n, std::move(amps));
}

Complex PureState::amplitude(BasisIndex x) const {
  auto it = std::lower_bound(amps_.begin(), amps_.end(), x,
                             [](const auto& e, BasisIndex v) { return e.first < v; });
  if (it != amps_.end() && it->first == x) return it->second;
  return {};
}

double PureState::norm() const {
  double s = 0.0;
  for (const auto& [idx, amp] : amps_) {
    (void)idx;
    s += std::norm(amp);
  }
  return std::sqrt(s);
}

void PureState::normalize() {
  const double nrm = norm();
  if (nrm <= 0.0) throw std::invalid_argument("PureState::normalize: zero state");
  for (auto& [idx, amp] : amps_) {
    (void)idx;
    amp /= nrm;
  }
  std::erase_if(amps_, [](const auto& e) { return std::abs(e.second) < kPruneTol; });
}

Complex inner_product(const PureState& a, const PureState& b) {
  if (a.n_ != b.n_) throw std::invalid_argument("inner_product: qubit counts differ");
  Complex s{};
  auto ia = a.amps_.begin();
  auto ib = b.amps_.begin();
  while (ia != a.amps_.end() && ib != b.amps_.end()) {
    if (ia->first < ib->first)
      ++ia;
    else if (ib->first < ia->first)
      ++ib;
    else {
      s += std::conj(ia->second) * ib->second;
      ++ia;
      ++ib;
    }
  }
  return s;
}

double fidelity(const PureState& a, const PureState& b) {
  return std::norm(inner_product(a, b));
}

// ---------------------------------------------------------------------------
// JointState

void JointState::add_term(BasisIndex x, BasisIndex y, Complex coeff,
                          std::vector<AncillaFactor> factors) {
  if (static_cast<int>(factors.size()) != N_)
    throw std::invalid_argument("JointState::add_term: factor count != ancilla count");
  if (std::abs(coeff) < kPruneTol) return;
  terms_[key(x, y)] = JointTerm{coeff, std::move(factors)};
}

double JointState::total_trace() const {
  double tr = 0.0;
  for (const auto& [k, term] : terms_) {
    if (key_row(k) != key_col(k)) continue;
    Complex p = term.coeff;
    for (const AncillaFactor& f : term.factors) p *= f.trace();
    tr += p.real();
  }
  return tr;
}

void JointState::validate(double tol) const {
  for (const auto& [k, term] : terms_) {
    const BasisIndex x = key_row(k), y = key_col(k);
    for (const AncillaFactor& f : term.factors) {
      if (!f.allFinite()) throw std::logic_error("JointState: non-finite ancilla factor");
      if (f.trace().real() > 1.0 + 1e-12 || std::abs(f.trace().imag()) > 1e-12)
        throw std::logic_error("JointState: ancilla factor trace exceeds 1");
    }
    if (x == y) {
      if (std::abs(term.coeff.imag()) > tol || term.coeff.real() < -tol)
        throw std::logic_error("JointState: diagonal coefficient not real nonnegative");
      for (const AncillaFactor& f : term.factors)
        if ((f - f.adjoint().eval()).cwiseAbs().maxCoeff() > tol)
          throw std::logic_error("JointState: diagonal ancilla factor not Hermitian");
      continue;
    }
    auto partner = terms_.find(key(y, x));
    if (partner == terms_.end())
      throw std::logic_error("JointState: missing Hermitian partner term");
    const JointTerm& p = partner->second;
    if (std::abs(p.coeff - std::conj(term.coeff)) > tol)
      throw std::logic_error("JointState: partner coefficient is not the conjugate");
    for (int i = 0; i < N_; ++i)
      if ((p.factors[static_cast<std::size_t>(i)] -
           term.factors[static_cast<std::size_t>(i)].adjoint().eval())
              .cwiseAbs()
              .maxCoeff() > tol)
        throw std::logic_error("JointState: partner factor is not the adjoint");
  }
  if (std::abs(total_trace() - 1.0) > tol)
    throw std::logic_error("JointState: total trace deviates from 1");
}

DenseDensity densify(const JointState& joint) {
  const int n = joint.system_qubits();
  const int N = joint.ancilla_count();
  check_dense_capacity(n + N, "densify");
  const Eigen::Index dim = Eigen::Index{1} << (n + N);
  const Eigen::Index block = Eigen::Index{1} << N;
  DenseDensity out = DenseDensity::Zero(dim, dim);

  // Expand the factor product entry by entry; standard-mode factors have at
  // most two nonzero entries, so branches are pruned on exact zeros.
  struct Partial {
    Eigen::Index row, col;
    Complex value;
  };
  std::vector<Partial> frontier, next;
  for (const auto& [k, term] : joint.terms()) {
    const Eigen::Index xoff = static_cast<Eigen::Index>(JointState::key_row(k)) * block;
    const Eigen::Index yoff = static_cast<Eigen::Index>(JointState::key_col(k)) * block;
    frontier.assign(1, Partial{0, 0, term.coeff});
    for (const AncillaFactor& f : term.factors) {
      next.clear();
      for (const Partial& p : frontier)
        for (int r = 0; r < 2; ++r)
          for (int c = 0; c < 2; ++c) {
            const Complex v = f(r, c);
            if (v == Complex{}) continue;
            next.push_back(Partial{(p.row << 1) | r, (p.col << 1) | c, p.value * v});
          }
      frontier.swap(next);
    }
    for (const Partial& p : frontier) out(xoff + p.row, yoff + p.col) += p.value;
  }
  return out;
}

DenseDensity partial_trace_ancillas(const JointState& joint) {
  const int n = joint.system_qubits();
  check_dense_capacity(n, "partial_trace_ancillas");
  const Eigen::Index dim = Eigen::Index{1} << n;
  DenseDensity out = DenseDensity::Zero(dim, dim);
  for (const auto& [k, term] : joint.terms()) {
    Complex v = term.coeff;
    for (const AncillaFactor& f : term.factors) v *= f.trace();
    out(JointState::key_row(k), JointState::key_col(k)) += v;
  }
  return out;
}

std::map<SectorLabel, double> born_probabilities(const JointState& joint) {
  const int N = joint.ancilla_count();
  std::map<SectorLabel, double> probs;
  struct Branch {
    std::uint32_t bits;
    double weight;
  };
  std::vector<Branch> frontier, next;
  for (const auto& [k, term] : joint.terms()) {
    if (JointState::key_row(k) != JointState::key_col(k)) continue;
    frontier.assign(1, Branch{0u, term.coeff.real()});
    for (const AncillaFactor& f : term.factors) {
      next.clear();
      for (const Branch& b : frontier)
        for (int c = 0; c < 2; ++c) {
          const double w = f(c, c).real();
          if (w == 0.0) continue;  // exact zero branches are pruned
          next.push_back(Branch{(b.bits << 1) | static_cast<std::uint32_t>(c), b.weight * w});
        }
      frontier.swap(next);
      if (frontier.size() > (1u << 22))
        throw CapacityError("born_probabilities: outcome tree too large");
    }
    for (const Branch& b : frontier) probs[SectorLabel{b.bits, N}] += b.weight;
  }
  return probs;
}

MeasurementOutcome measure_ancillas(const JointState& joint, std::uint64_t seed) {
  const int N = joint.ancilla_count();
  Rng rng(seed);

  // Draw the system branch from the diagonal weights, then each ancilla bit
  // from its conditional 2-outcome distribution.
  double total = 0.0;
  for (const auto& [k, term] : joint.terms()) {
    if (JointState::key_row(k) != JointState::key_col(k)) continue;
    Complex p = term.coeff;
    for (const AncillaFactor& f : term.factors) p *= f.trace();
    total += p.real();
  }
  if (total <= 0.0) throw std::invalid_argument("measure_ancillas: state has no weight");

  const double pick = rng.uniform() * total;
  double acc = 0.0;
  const JointTerm* chosen = nullptr;
  for (const auto& [k, term] : joint.terms()) {
    if (JointState::key_row(k) != JointState::key_col(k)) continue;
    Complex p = term.coeff;
    for (const AncillaFactor& f : term.factors) p *= f.trace();
    acc += p.real();
    chosen = &term;
    if (acc >= pick) break;
  }

  std::uint32_t label_bits = 0;
  for (int i = 0; i < N; ++i) {
    const AncillaFactor& f = chosen->factors[static_cast<std::size_t>(i)];
    const double tr = f.trace().real();
    const double p1 = tr > 0.0 ? std::clamp(f(1, 1).real() / tr, 0.0, 1.0) : 0.0;
    const bool one = rng.uniform() < p1;
    if (one) label_bits |= 1u << (N - 1 - i);
  }
  const SectorLabel label{label_bits, N};

  // Condition every term on the outcome.
  std::map<std::uint64_t, Complex> block;
  double prob = 0.0;
  for (const auto& [k, term] : joint.terms()) {
    Complex v = term.coeff;
    for (int i = 0; i < N; ++i) {
      const int c = label.bit(i + 1) ? 1 : 0;
      v *= term.factors[static_cast<std::size_t>(i)](c, c);
      if (v == Complex{}) break;
    }
    if (v == Complex{}) continue;
    block[k] = v;
    if (JointState::key_row(k) == JointState::key_col(k)) prob += v.real();
  }
  if (prob <= 0.0)
    throw std::logic_error("measure_ancillas: sampled a zero-probability outcome");

  MeasurementOutcome out;
  out.label = label;
  out.probability = prob;

  // Rank-1 (Gram) check: find the heaviest diagonal, build candidate
  // amplitudes from its column, then verify every entry.
  BasisIndex pivot = 0;
  double pivot_weight = -1.0;
  for (const auto& [k, v] : block) {
    if (JointState::key_row(k) != JointState::key_col(k)) continue;
    if (v.real() > pivot_weight) {
      pivot_weight = v.real();
      pivot = JointState::key_row(k);
    }
  }
  bool pure = pivot_weight > 0.0;
  std::map<BasisIndex, Complex> amp;
  if (pure) {
    const double inv = 1.0 / std::sqrt(pivot_weight);
    for (const auto& [k, v] : block)
      if (JointState::key_col(k) == pivot) amp[JointState::key_row(k)] = v * inv;
    const double scale = std::max(prob, 1.0);
    for (const auto& [k, v] : block) {
      const auto ax = amp.find(JointState::key_row(k));
      const auto ay = amp.find(JointState::key_col(k));
      const Complex model = (ax == amp.end() || ay == amp.end())
                                ? Complex{}
                                : ax->second * std::conj(ay->second);
      if (std::abs(v - model) > kGramTol * scale) {
        pure = false;
        break;
      }
    }
    // Also require that no row exists outside the pivot column's support.
    if (pure) {
      double mass = 0.0;
      for (const auto& [x, a] : amp) {
        (void)x;
        mass += std::norm(a);
      }
      if (std::abs(mass - prob) > kGramTol * std::max(prob, 1.0)) pure = false;
    }
  }

  if (pure) {
    std::vector<std::pair<BasisIndex, Complex>> amps(amp.begin(), amp.end());
    PureState psi(joint.system_qubits(), std::move(amps));
    psi.normalize();
    out.state = std::move(psi);
    return out;
  }

  check_dense_capacity(joint.system_qubits(), "measure_ancillas (mixed outcome)");
  const Eigen::Index dim = Eigen::Index{1} << joint.system_qubits();
  DenseDensity rho = DenseDensity::Zero(dim, dim);
  for (const auto& [k, v] : block)
    rho(JointState::key_row(k), JointState::key_col(k)) = v / prob;
  out.state = std::move(rho);
  return out;
}

// ---------------------------------------------------------------------------
// Norms and dense helpers

namespace {

bool is_hermitian(const Eigen::MatrixXcd& m) {
  if (m.rows() != m.cols()) return false;
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  return (m - m.adjoint().eval()).cwiseAbs().maxCoeff() <= 1e-12 * scale;
}

void check_norm_capacity(const Eigen::MatrixXcd& m) {
  if (m.rows() > (Eigen::Index{1} << kMaxDenseQubits))
    throw CapacityError("norm: matrix dimension exceeds 2^" + std::to_string(kMaxDenseQubits));
}

}  // namespace

double operator_norm(const Eigen::MatrixXcd& m) {
  check_norm_capacity(m);
  if (m.size() == 0) return 0.0;
  if (is_hermitian(m)) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m, Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().maxCoeff();
  }
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  return svd.singularValues()(0);
}

double trace_norm(const Eigen::MatrixXcd& m) {
  check_norm_capacity(m);
  if (m.size() == 0) return 0.0;
  if (is_hermitian(m)) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m, Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().sum();
  }
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  return svd.singularValues().sum();
}

double operator_norm_distance(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  return operator_norm(a - b);
}

double trace_norm_distance(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  return trace_norm(a - b);
}

double purity(const DenseDensity& rho) { return (rho * rho).trace().real(); }

DenseDensity dense_from_pure(const PureState& psi) {
  check_dense_capacity(psi.qubits(), "dense_from_pure");
  const Eigen::Index dim = Eigen::Index{1} << psi.qubits();
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(dim);
  for (const auto& [idx, amp] : psi.amplitudes()) v(idx) = amp;
  return v * v.adjoint();
}

double fidelity(const PureState& psi, const DenseDensity& rho) {
  Complex s{};
  for (const auto& [x, ax] : psi.amplitudes())
    for (const auto& [y, ay] : psi.amplitudes()) s += std::conj(ax) * rho(x, y) * ay;
  return s.real();
}

// ---------------------------------------------------------------------------
// State files

PureState parse_state_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("state file: invalid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("n") || !doc.contains("amplitudes"))
    throw ParseError("state file: expected object with 'n' and 'amplitudes'");
  if (!doc["n"].is_number_integer())
    throw ParseError("state file: 'n' must be an integer");
  const int n = doc["n"].get<int>();
  if (n < 1 || n > 24) throw ParseError("state file: 'n' outside [1, 24]");
  if (!doc["amplitudes"].is_array() || doc["amplitudes"].empty())
    throw ParseError("state file: 'amplitudes' must be a nonempty array");

  std::vector<std::pair<BasisIndex, Complex>> amps;
  for (const auto& entry : doc["amplitudes"]) {
    if (!entry.is_object() || !entry.contains("bits"))
      throw ParseError("state file: each amplitude needs a 'bits' string");
    const std::string bits = entry["bits"].get<std::string>();
    if (static_cast<int>(bits.size()) != n)
      throw ParseError("state file: bits '" + bits + "' does not have length n=" +
                       std::to_string(n));
    BasisIndex idx = 0;
    for (char ch : bits) {
      if (ch != '0' && ch != '1')
        throw ParseError("state file: bits '" + bits + "' contains a character besides 0/1");
      idx = (idx << 1) | static_cast<BasisIndex>(ch == '1');
    }
    const double re = entry.value("re", 0.0);
    const double im = entry.value("im", 0.0);
    amps.emplace_back(idx, Complex{re, im});
  }
  PureState psi(n, std::move(amps));
  if (psi.norm() < kPruneTol) throw ParseError("state file: state has zero norm");
  psi.normalize();
  return psi;
}

std::string emit_state_json(const PureState& psi) {
  std::ostringstream out;
  out << "{\n  \"n\": " << psi.qubits() << ",\n  \"amplitudes\": [\n";
  const int n = psi.qubits();
  bool first = true;
  for (const auto& [idx, amp] : psi.amplitudes()) {
    if (!first) out << ",\n";
    first = false;
    std::string bits(static_cast<std::size_t>(n), '0');
    for (int b = 0; b < n; ++b)
      if ((idx >> (n - 1 - b)) & 1u) bits[static_cast<std::size_t>(b)] = '1';
    out << "    {\"bits\": \"" << bits << "\", \"re\": " << fmt_double(amp.real())
        << ", \"im\": " << fmt_double(amp.imag()) << "}";
  }
  out << "\n  ]\n}\n";
  return out.str();
}

PureState read_state_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("state file: cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_state_json(buf.str());
}

void write_state_file(const std::string& path, const PureState& psi) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("state file: cannot write '" + path + "'");
  out << emit_state_json(psi);
}

// ---------------------------------------------------------------------------
// Rng

std::uint64_t Rng::raw() {
  state_ += 0x9E3779B97F4A7C15ull;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

double Rng::uniform() { return static_cast<double>(raw() >> 11) * 0x1.0p-53; }

}  // namespace dqnet
