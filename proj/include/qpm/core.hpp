// Dense complex linear algebra for small multipartite quantum systems:
// tensor-product state vectors and density operators, subsystem-targeted
// operator application, partial trace, projective and POVM measurement,
// Hermitian matrix exponentials, and seeded sampling.
#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace qpm {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

// Tolerance for single structural checks (normalization, hermiticity,
// unitarity, POVM completeness).
inline constexpr double kStructuralTol = 1e-10;
// Tolerance for quantities assembled from several structural pieces
// (channel completeness, multi-stage circuit outputs).
inline constexpr double kComposedTol = 1e-9;
// Below this probability an outcome is treated as impossible and no
// post-measurement state is produced.
inline constexpr double kProbFloor = 1e-12;

// Ordered list of subsystem dimensions.  The joint basis is lexicographic
// with the leftmost subsystem most significant, matching the ket-string
// convention |q0 q1 q2>.  An empty list is the scalar (dimension-1) space,
// used for processors whose program register is trivial.
class Shape {
 public:
  Shape() = default;
  explicit Shape(std::vector<int> dims);

  static Shape qubits(int n);
  static Shape single(int dim);

  int total() const { return total_; }
  int count() const { return static_cast<int>(dims_.size()); }
  int dim(int i) const { return dims_.at(static_cast<std::size_t>(i)); }
  const std::vector<int>& dims() const { return dims_; }

  // strides()[i] = product of dims to the right of subsystem i.
  std::vector<int> strides() const;
  // Digit of `index` at subsystem `i` in the mixed-radix expansion.
  int digit(int index, int i) const;

  bool operator==(const Shape& other) const { return dims_ == other.dims_; }
  bool operator!=(const Shape& other) const { return !(*this == other); }

 private:
  std::vector<int> dims_;
  int total_ = 1;
};

Shape tensor(const Shape& a, const Shape& b);

// Unit vector of complex amplitudes over a Shape.
class StateVector {
 public:
  StateVector(Shape shape, Vector amps);
  // Normalizes `amps`; throws on (numerically) zero input.
  static StateVector normalized(Shape shape, Vector amps);

  const Shape& shape() const { return shape_; }
  const Vector& amps() const { return amps_; }
  int dim() const { return shape_.total(); }
  Complex amp(int i) const { return amps_(i); }

 private:
  Shape shape_;
  Vector amps_;
};

// Hermitian, positive-semidefinite, unit-trace matrix over a Shape.
class DensityOperator {
 public:
  DensityOperator(Shape shape, Matrix mat);
  static DensityOperator from_pure(const StateVector& psi);

  const Shape& shape() const { return shape_; }
  const Matrix& mat() const { return mat_; }
  int dim() const { return shape_.total(); }

 private:
  Shape shape_;
  Matrix mat_;
};

// Square matrix over a Shape with a lazily verified unitarity cache.
class Operator {
 public:
  Operator(Shape shape, Matrix mat);

  // Verifies U U^dag = I within kStructuralTol; throws otherwise.
  static Operator unitary(Shape shape, Matrix mat);
  // Builds the matrix sending basis state j to basis state image[j].
  // `image` must be a bijection; the result is unitary by construction.
  static Operator permutation(Shape shape, const std::vector<int>& image);
  static Operator identity(Shape shape);

  const Shape& shape() const { return shape_; }
  const Matrix& mat() const { return mat_; }
  int dim() const { return shape_.total(); }

  bool is_unitary() const;
  Operator adjoint() const;

 private:
  struct VerifiedUnitaryTag {};
  Operator(Shape shape, Matrix mat, VerifiedUnitaryTag);

  Shape shape_;
  Matrix mat_;
  mutable std::optional<bool> unitary_;
};

// Positive operators summing to identity, with one outcome label each.
class Povm {
 public:
  Povm(Shape shape, std::vector<Matrix> elements, std::vector<std::string> labels);

  const Shape& shape() const { return shape_; }
  const std::vector<Matrix>& elements() const { return elements_; }
  const std::vector<std::string>& labels() const { return labels_; }
  int outcome_count() const { return static_cast<int>(elements_.size()); }

 private:
  Shape shape_;
  std::vector<Matrix> elements_;
  std::vector<std::string> labels_;
};

// Seeded random stream.  The raw engine is std::mt19937_64 (a fully
// specified sequence); uniform and Gaussian variates are derived from it
// with fixed arithmetic so that a seed pins the entire draw sequence.
// Single-owner: never share a stream across threads, fork() instead.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed);

  std::uint64_t seed() const { return seed_; }
  // Uniform double in [0, 1) with 53 random bits.
  double uniform();
  // Standard normal via Box-Muller on two uniforms.
  double gaussian();
  // Independent stream derived from (seed, salt) only, not from the
  // current draw position.
  RngStream fork(std::uint64_t salt) const;

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

// --- core operations -------------------------------------------------------

StateVector tensor(const StateVector& a, const StateVector& b);
Operator tensor(const Operator& a, const Operator& b);
DensityOperator tensor(const DensityOperator& a, const DensityOperator& b);

// Trace out every subsystem not listed in `keep` (indices into rho's shape,
// distinct, nonempty).  The surviving subsystems keep their relative order.
DensityOperator partial_trace(const DensityOperator& rho, const std::vector<int>& keep);

// Apply a unitary `op` to the listed subsystems (identity elsewhere),
// preserving norm / trace.  `targets` maps op's subsystems, in order, onto
// subsystems of the state, so e.g. a CNOT applied to targets {2,0} takes
// qubit 2 as control and qubit 0 as target.  Non-unitary action goes
// through measure_projective / embed instead.
StateVector apply(const Operator& op, const std::vector<int>& targets, const StateVector& s);
DensityOperator apply(const Operator& op, const std::vector<int>& targets, const DensityOperator& rho);

// `op` embedded into `shape` as a full-space matrix.
Operator embed(const Operator& op, const std::vector<int>& targets, const Shape& shape);

struct ProjectiveOutcome {
  double probability = 0.0;
  // Empty when the outcome probability is below kProbFloor.
  std::optional<StateVector> post_state;
};

// Probability and post-measurement state of the projector outcome.
// `projector` must be Hermitian and idempotent within kStructuralTol.
ProjectiveOutcome measure_projective(const StateVector& s, const Operator& projector,
                                     const std::vector<int>& targets);

std::vector<double> povm_probabilities(const DensityOperator& rho, const Povm& povm);
std::vector<double> povm_probabilities(const StateVector& psi, const Povm& povm);

// Sample an index from `probs` (must sum to 1 within 1e-8; entries below
// -kProbFloor are an error, small negatives are clamped).
int sample_outcome(const std::vector<double>& probs, RngStream& rng);

// Uniform (Haar) random pure qubit: two iid standard complex Gaussian
// amplitudes, normalized.
StateVector haar_random_qubit(RngStream& rng);

// exp(scale * h) for Hermitian h via spectral decomposition.  Unitary when
// scale is purely imaginary.
Operator herm_exp(const Operator& h, Complex scale);

// --- fixed gates, basis states, and small helpers --------------------------

Operator pauli_x();
Operator pauli_y();
Operator pauli_z();
Operator hadamard();
// CNOT on two qubits, first subsystem is the control.
Operator cnot();
// Toffoli on three qubits, first two subsystems are the controls.
Operator toffoli();

StateVector basis_state(const Shape& shape, int index);
StateVector ket0();
StateVector ket1();
StateVector ket_plus();
StateVector ket_minus();

// Two-qubit Bell states, named by their amplitude content.
StateVector bell_phi_plus();   // (|00> + |11>)/sqrt(2)
StateVector bell_phi_minus();  // (|00> - |11>)/sqrt(2)
StateVector bell_psi_plus();   // (|01> + |10>)/sqrt(2)
StateVector bell_psi_minus();  // (|01> - |10>)/sqrt(2)

Operator projector_onto(const StateVector& psi);

// The qubit state orthogonal to psi (unique up to phase).
StateVector qubit_orthogonal(const StateVector& psi);

// |<a|b>|^2 for pure states; <psi|rho|psi> against a density operator.
double fidelity(const StateVector& a, const StateVector& b);
double fidelity(const DensityOperator& rho, const StateVector& psi);

// Haar-random unitary via QR of a complex Ginibre matrix with the standard
// phase correction.
Operator haar_random_unitary(int dim, RngStream& rng);

}  // namespace qpm
