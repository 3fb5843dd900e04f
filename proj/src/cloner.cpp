#include "qpm/cloner.hpp"

#include <cmath>
#include <stdexcept>

namespace qpm::cloner {

namespace {

constexpr double kIndistinguishableTol = 1e-9;

// Gram-Schmidt a candidate against the vectors collected so far; returns an
// empty optional when the remainder is numerically zero.
std::optional<Vector> orthonormal_remainder(const std::vector<Vector>& basis, Vector v) {
  for (const Vector& e : basis) v -= e.dot(v) * e;
  double n = v.norm();
  if (n < 1e-7) return std::nullopt;
  return Vector(v / n);
}

void complete_basis(std::vector<Vector>& basis, int dim) {
  for (int k = 0; k < dim && static_cast<int>(basis.size()) < dim; ++k) {
    Vector e = Vector::Zero(dim);
    e(k) = 1.0;
    if (auto r = orthonormal_remainder(basis, std::move(e))) basis.push_back(*r);
  }
  if (static_cast<int>(basis.size()) != dim) {
    throw std::runtime_error("ProbabilisticCloner: basis completion failed");
  }
}

}  // namespace

StateVector xi00_state() { return bell_phi_plus(); }

StateVector xi0x_state() { return tensor(ket0(), ket_plus()); }

ClonerProgram::ClonerProgram(double c0, double c1) : c0_(c0), c1_(c1) {
  if (std::abs(c0 * c0 + c1 * c1 + c0 * c1 - 1.0) > kStructuralTol) {
    throw std::invalid_argument("ClonerProgram: c0^2 + c1^2 + c0*c1 must equal 1");
  }
}

ClonerProgram ClonerProgram::symmetric() {
  const double c = 1.0 / std::sqrt(3.0);
  return ClonerProgram(c, c);
}

StateVector ClonerProgram::program_state() const {
  Vector v = c0_ * xi00_state().amps() + c1_ * xi0x_state().amps();
  return StateVector(Shape::qubits(2), std::move(v));
}

Operator cloner_circuit() {
  const Shape shape = Shape::qubits(3);
  Matrix u = embed(cnot(), {0, 1}, shape).mat();
  u = embed(cnot(), {0, 2}, shape).mat() * u;
  u = embed(cnot(), {1, 0}, shape).mat() * u;
  u = embed(cnot(), {2, 0}, shape).mat() * u;
  return Operator::unitary(shape, std::move(u));
}

TwoStateSet make_two_state_set(StateVector psi1, StateVector psi2) {
  if (psi1.dim() != 2 || psi2.dim() != 2) {
    throw std::invalid_argument("make_two_state_set: states must be single qubits");
  }
  double overlap = std::abs(psi1.amps().dot(psi2.amps()));
  return TwoStateSet{std::move(psi1), std::move(psi2), overlap};
}

TwoStateSet pair_with_overlap(double overlap) {
  if (overlap < 0.0 || overlap > 1.0) throw std::invalid_argument("pair_with_overlap: overlap outside [0,1]");
  Vector v(2);
  v << overlap, std::sqrt(std::max(0.0, 1.0 - overlap * overlap));
  return make_two_state_set(ket0(), StateVector(Shape::qubits(1), std::move(v)));
}

CloneOutputs clone(const StateVector& psi, const ClonerProgram& prog) {
  if (psi.dim() != 2) throw std::invalid_argument("clone: input must be a single qubit");
  StateVector joint = apply(cloner_circuit(), {0, 1, 2}, tensor(psi, prog.program_state()));
  DensityOperator full = DensityOperator::from_pure(joint);
  DensityOperator out1 = partial_trace(full, {0});
  DensityOperator out2 = partial_trace(full, {1});
  // Port 2 emits the optimal-UNOT output in the conjugate basis; the fixed
  // sigma_y rotation carries |psi*> to |psi_perp> for every psi.
  DensityOperator anticlone = apply(pauli_y(), {0}, partial_trace(full, {2}));
  return CloneOutputs{std::move(out1), std::move(out2), std::move(anticlone)};
}

Matrix closed_form_output1(const ClonerProgram& prog, const StateVector& psi) {
  Matrix pure = psi.amps() * psi.amps().adjoint();
  return (prog.c0() * prog.c0() + prog.c0() * prog.c1()) * pure +
         (prog.c1() * prog.c1() / 2.0) * Matrix::Identity(2, 2);
}

Matrix closed_form_output2(const ClonerProgram& prog, const StateVector& psi) {
  Matrix pure = psi.amps() * psi.amps().adjoint();
  return (prog.c1() * prog.c1() + prog.c0() * prog.c1()) * pure +
         (prog.c0() * prog.c0() / 2.0) * Matrix::Identity(2, 2);
}

double anticlone_fidelity(const StateVector& psi) {
  CloneOutputs outs = clone(psi, ClonerProgram::symmetric());
  return fidelity(outs.anticlone, qubit_orthogonal(psi));
}

ProbabilisticCloner::ProbabilisticCloner(TwoStateSet set)
    : set_(std::move(set)),
      psi2_aligned_(set_.psi2),
      success_probability_(1.0 / (1.0 + set_.overlap)),
      unitary_(Operator::identity(Shape::qubits(3))) {
  if (set_.overlap > 1.0 - kIndistinguishableTol) {
    throw std::invalid_argument("ProbabilisticCloner: states are indistinguishable");
  }
  // Rotate psi2's global phase so the pair overlap is real and nonnegative;
  // the cloned ray is unchanged.
  Complex ip = set_.psi1.amps().dot(set_.psi2.amps());
  if (std::abs(ip) > 1e-14) {
    psi2_aligned_ = StateVector(Shape::qubits(1), set_.psi2.amps() * (std::abs(ip) / ip));
  }

  const double s = set_.overlap;
  const double p = success_probability_;
  const Shape shape = Shape::qubits(3);
  const Vector blank = tensor(ket0(), ket0()).amps();

  auto input_vec = [&](const StateVector& psi) {
    Vector x = Vector::Zero(8);
    for (int d = 0; d < 2; ++d) x.segment(d * 4, 4) = psi.amp(d) * blank;
    return x;
  };
  auto output_vec = [&](const StateVector& psi) {
    Vector pair = tensor(psi, psi).amps();
    Vector y = Vector::Zero(8);
    for (int d = 0; d < 4; ++d) y(2 * d) = std::sqrt(p) * pair(d);  // flag |0>
    y(1) += std::sqrt(1.0 - p);                                     // fixed failure state |00>|1>
    return y;
  };

  Vector x1 = input_vec(set_.psi1), x2 = input_vec(psi2_aligned_);
  Vector y1 = output_vec(set_.psi1), y2 = output_vec(psi2_aligned_);

  // Both pairs share the Gram matrix [[1, s], [s, 1]], so mapping the
  // orthonormalized inputs onto the orthonormalized outputs reproduces
  // x_i -> y_i and extends to a unitary.
  const double r = std::sqrt(1.0 - s * s);
  std::vector<Vector> in_basis{x1, (x2 - s * x1) / r};
  std::vector<Vector> out_basis{y1, (y2 - s * y1) / r};
  complete_basis(in_basis, 8);
  complete_basis(out_basis, 8);

  Matrix u = Matrix::Zero(8, 8);
  for (int k = 0; k < 8; ++k) u += out_basis[static_cast<std::size_t>(k)] * in_basis[static_cast<std::size_t>(k)].adjoint();
  unitary_ = Operator::unitary(shape, std::move(u));
}

ProbabilisticCloneResult ProbabilisticCloner::run(int which, RngStream& rng) const {
  if (which != 1 && which != 2) throw std::invalid_argument("ProbabilisticCloner::run: which must be 1 or 2");
  const StateVector& psi = which == 1 ? set_.psi1 : psi2_aligned_;
  StateVector out = apply(unitary_, {0, 1, 2}, tensor(tensor(psi, ket0()), ket0()));

  double p_success = 0.0;
  for (int d = 0; d < 4; ++d) p_success += std::norm(out.amp(2 * d));
  if (rng.uniform() >= p_success) return ProbabilisticCloneResult{false, std::nullopt};

  Vector pair(4);
  for (int d = 0; d < 4; ++d) pair(d) = out.amp(2 * d);
  return ProbabilisticCloneResult{true, StateVector::normalized(Shape::qubits(2), std::move(pair))};
}

ProbabilisticCloneResult probabilistic_clone(const TwoStateSet& set, int which, RngStream& rng) {
  return ProbabilisticCloner(set).run(which, rng);
}

}  // namespace qpm::cloner
