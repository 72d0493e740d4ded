#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "dqnet/formula.hpp"

namespace dqnet {

using Complex = std::complex<double>;

/// 2x2 ancilla block in the computational basis: M(i, j) = <i|M|j>.
using AncillaFactor = Eigen::Matrix2cd;

/// Dense operator on the full register. Index convention: system qubit 1 is
/// the most significant bit, ancilla i sits at position n+i, so a full basis
/// index is (system bits) * 2^N + (ancilla bits).
using DenseDensity = Eigen::MatrixXcd;

inline constexpr int kMaxDenseQubits = 12;    // densify / norms refuse beyond 2^12
inline constexpr double kPruneTol = 1e-15;    // amplitudes/coefficients below are dropped
inline constexpr double kHermTol = 1e-10;     // Hermiticity / trace validation
inline constexpr double kGramTol = 1e-10;     // rank-1 detection in measurements

/// Sparse pure state on n system qubits: sorted support of basis amplitudes.
class PureState {
 public:
  PureState() = default;
  PureState(int n, std::vector<std::pair<BasisIndex, Complex>> amplitudes);

  static PureState basis_state(int n, BasisIndex bits);
  /// (1/sqrt(2^n)) sum_x |x>. 1 <= n <= 24.
  static PureState uniform_superposition(int n);

  int qubits() const { return n_; }
  const std::vector<std::pair<BasisIndex, Complex>>& amplitudes() const { return amps_; }
  Complex amplitude(BasisIndex x) const;
  std::size_t support_size() const { return amps_.size(); }

  double norm() const;
  /// Scale to unit norm and drop amplitudes below kPruneTol.
  void normalize();

  friend Complex inner_product(const PureState& a, const PureState& b);

 private:
  int n_ = 0;
  std::vector<std::pair<BasisIndex, Complex>> amps_;  // sorted by basis index
};

Complex inner_product(const PureState& a, const PureState& b);
double fidelity(const PureState& a, const PureState& b);

/// System-matrix-element term of a factored joint state:
/// coeff * |x><y| (x) F_1 (x) ... (x) F_N.
struct JointTerm {
  Complex coeff;
  std::vector<AncillaFactor> factors;
};

/// Factored density operator on system (x) ancillas. Terms are keyed by the
/// (x, y) pair packed into a 64-bit integer; the map keeps iteration
/// deterministic. Hermiticity is represented explicitly: the (y, x) term is
/// stored alongside (x, y).
class JointState {
 public:
  JointState() = default;
  JointState(int system_qubits, int ancilla_count)
      : n_(system_qubits), N_(ancilla_count) {}

  static std::uint64_t key(BasisIndex x, BasisIndex y) {
    return (static_cast<std::uint64_t>(x) << 32) | y;
  }
  static BasisIndex key_row(std::uint64_t k) { return static_cast<BasisIndex>(k >> 32); }
  static BasisIndex key_col(std::uint64_t k) { return static_cast<BasisIndex>(k & 0xffffffffu); }

  int system_qubits() const { return n_; }
  int ancilla_count() const { return N_; }
  std::map<std::uint64_t, JointTerm>& terms() { return terms_; }
  const std::map<std::uint64_t, JointTerm>& terms() const { return terms_; }

  void add_term(BasisIndex x, BasisIndex y, Complex coeff, std::vector<AncillaFactor> factors);

  /// Trace of the full operator (sum over diagonal terms of coeff * prod tr F_i).
  double total_trace() const;

  /// Check the structural invariants: Hermitian pairing of (x,y)/(y,x),
  /// real nonnegative diagonal, factor traces <= 1 + tol, total trace 1 + tol.
  /// Throws std::logic_error naming the violated property.
  void validate(double tol = kHermTol) const;

 private:
  int n_ = 0;
  int N_ = 0;
  std::map<std::uint64_t, JointTerm> terms_;
};

/// Expand the factored form into a dense matrix on all n + N qubits.
/// Refuses instances over kMaxDenseQubits total qubits.
DenseDensity densify(const JointState& joint);

/// Trace out all ancillas: dense system operator with entries
/// coeff(x,y) * prod_i tr F_i. System side capped at kMaxDenseQubits.
DenseDensity partial_trace_ancillas(const JointState& joint);

/// Exact Born distribution of a computational-basis measurement of every
/// ancilla. Keys are the N-bit outcome patterns (clause 1 = most significant).
/// Zero-probability branches are pruned exactly.
std::map<SectorLabel, double> born_probabilities(const JointState& joint);

struct MeasurementOutcome {
  SectorLabel label;
  double probability = 0.0;  // Born probability of `label`
  std::variant<PureState, DenseDensity> state;

  bool is_pure() const { return std::holds_alternative<PureState>(state); }
  const PureState& pure() const { return std::get<PureState>(state); }
  const DenseDensity& dense() const { return std::get<DenseDensity>(state); }
};

/// Sample one projective measurement of all ancillas with a deterministic
/// seeded generator, and return the conditioned system state. The state
/// comes back as a PureState whenever the conditioned block is rank one
/// (Gram check at kGramTol), otherwise as a dense matrix.
MeasurementOutcome measure_ancillas(const JointState& joint, std::uint64_t seed);

/// Largest singular value of a - b.  For two orthogonal pure-state
/// projectors this is 1.
double operator_norm(const Eigen::MatrixXcd& m);
double trace_norm(const Eigen::MatrixXcd& m);
double operator_norm_distance(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b);
double trace_norm_distance(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b);

double purity(const DenseDensity& rho);
DenseDensity dense_from_pure(const PureState& psi);
double fidelity(const PureState& psi, const DenseDensity& rho);

/// JSON state files: {"n": 3, "amplitudes": [{"bits": "010", "re": .., "im": ..}, ...]}
/// The reader normalizes; the writer sorts by bit pattern and emits
/// round-trip-exact floats.
PureState parse_state_json(const std::string& text);
std::string emit_state_json(const PureState& psi);
PureState read_state_file(const std::string& path);
void write_state_file(const std::string& path, const PureState& psi);

/// Deterministic uniform doubles in [0, 1): splitmix64 stream, so identical
/// seeds give identical bytes on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}
  std::uint64_t raw();
  double uniform();

 private:
  std::uint64_t state_;
};

}  // namespace dqnet
