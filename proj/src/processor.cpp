#include "qpm/processor.hpp"

#include <cmath>
#include <stdexcept>

#include "qpm/cloner.hpp"

namespace qpm::proc {

namespace {

std::vector<Matrix> validate_kraus(const Shape& data_shape, std::vector<Matrix> kraus) {
  if (kraus.empty()) throw std::invalid_argument("QuantumChannel: no Kraus operators");
  const int d = data_shape.total();
  Matrix completeness = Matrix::Zero(d, d);
  for (const Matrix& k : kraus) {
    if (k.rows() != d || k.cols() != d) throw std::invalid_argument("QuantumChannel: Kraus size mismatch");
    completeness += k.adjoint() * k;
  }
  completeness.diagonal().array() -= 1.0;
  if (completeness.cwiseAbs().maxCoeff() > kComposedTol) {
    throw std::invalid_argument("QuantumChannel: Kraus set is not trace preserving");
  }
  return kraus;
}

DensityOperator process_state_from_kraus(const Shape& data_shape, const std::vector<Matrix>& kraus) {
  const int d = data_shape.total();
  Matrix rho = Matrix::Zero(d * d, d * d);
  const double scale = 1.0 / std::sqrt(static_cast<double>(d));
  for (const Matrix& k : kraus) {
    // (I (x) K) applied to the maximally entangled pair: amp(j, l) = K(l, j)/sqrt(d).
    Vector v(d * d);
    for (int j = 0; j < d; ++j) {
      for (int l = 0; l < d; ++l) v(j * d + l) = scale * k(l, j);
    }
    rho += v * v.adjoint();
  }
  return DensityOperator(tensor(data_shape, data_shape), std::move(rho));
}

}  // namespace

QuantumChannel::QuantumChannel(Shape data_shape, std::vector<Matrix> kraus)
    : data_shape_(std::move(data_shape)),
      kraus_(validate_kraus(data_shape_, std::move(kraus))),
      process_state_(process_state_from_kraus(data_shape_, kraus_)) {}

QuantumChannel QuantumChannel::from_unitary(const Operator& u) {
  if (!u.is_unitary()) throw std::invalid_argument("QuantumChannel::from_unitary: not unitary");
  return QuantumChannel(u.shape(), {u.mat()});
}

DensityOperator QuantumChannel::apply(const DensityOperator& rho) const {
  if (rho.shape().total() != dim()) throw std::invalid_argument("QuantumChannel::apply: shape mismatch");
  Matrix out = Matrix::Zero(dim(), dim());
  for (const Matrix& k : kraus_) out += k * rho.mat() * k.adjoint();
  return DensityOperator(rho.shape(), std::move(out));
}

StateVector maximally_entangled(const Shape& shape) {
  const int d = shape.total();
  Vector v = Vector::Zero(d * d);
  const double scale = 1.0 / std::sqrt(static_cast<double>(d));
  for (int j = 0; j < d; ++j) v(j * d + j) = scale;
  return StateVector(tensor(shape, shape), std::move(v));
}

Processor make_processor(Operator u, Shape data_shape, Shape program_shape) {
  if (u.dim() != data_shape.total() * program_shape.total()) {
    throw std::invalid_argument("make_processor: unitary does not match data (x) program dimensions");
  }
  if (!u.is_unitary()) throw std::invalid_argument("make_processor: operator is not unitary");
  return Processor{std::move(u), std::move(data_shape), std::move(program_shape)};
}

Processor cloner_processor() {
  return make_processor(cloner::cloner_circuit(), Shape::qubits(1), Shape::qubits(2));
}

QuantumChannel deterministic_map(const Processor& p, const StateVector& program) {
  if (program.shape() != p.program_shape) {
    throw std::invalid_argument("deterministic_map: program shape mismatch");
  }
  const int d = p.data_shape.total();
  const int m = p.program_shape.total();
  const Matrix& u = p.unitary.mat();
  std::vector<Matrix> kraus(static_cast<std::size_t>(m), Matrix::Zero(d, d));
  for (int out = 0; out < m; ++out) {
    Matrix& k = kraus[static_cast<std::size_t>(out)];
    for (int row = 0; row < d; ++row) {
      for (int col = 0; col < d; ++col) {
        Complex acc = 0.0;
        for (int in = 0; in < m; ++in) acc += u(row * m + out, col * m + in) * program.amp(in);
        k(row, col) = acc;
      }
    }
  }
  return QuantumChannel(p.data_shape, std::move(kraus));
}

StateVector pauli_channel_program(const std::array<Complex, 4>& c) {
  double norm2 = 0.0;
  for (const Complex& x : c) norm2 += std::norm(x);
  if (std::abs(norm2 - 1.0) > kStructuralTol) {
    throw std::invalid_argument("pauli_channel_program: coefficients are not normalized");
  }
  Vector v = c[0] * bell_phi_plus().amps() + c[1] * bell_psi_plus().amps() +
             c[2] * bell_psi_minus().amps() + c[3] * bell_phi_minus().amps();
  return StateVector(Shape::qubits(2), std::move(v));
}

ProbabilisticOutcome probabilistic_execute(const Processor& p, const StateVector& program,
                                           const Operator& accept_projector,
                                           const StateVector& data_in) {
  if (program.shape() != p.program_shape) {
    throw std::invalid_argument("probabilistic_execute: program shape mismatch");
  }
  if (data_in.shape() != p.data_shape) {
    throw std::invalid_argument("probabilistic_execute: data shape mismatch");
  }
  if (accept_projector.shape() != p.program_shape) {
    throw std::invalid_argument("probabilistic_execute: accept projector must act on the program factor");
  }

  const int nd = p.data_shape.count();
  std::vector<int> all_targets(static_cast<std::size_t>(nd + p.program_shape.count()));
  for (std::size_t i = 0; i < all_targets.size(); ++i) all_targets[i] = static_cast<int>(i);
  std::vector<int> program_targets(static_cast<std::size_t>(p.program_shape.count()));
  for (std::size_t i = 0; i < program_targets.size(); ++i) program_targets[i] = nd + static_cast<int>(i);

  StateVector out = apply(p.unitary, all_targets, tensor(data_in, program));
  ProjectiveOutcome projected = measure_projective(out, accept_projector, program_targets);

  ProbabilisticOutcome result;
  result.probability = projected.probability;
  if (!projected.post_state.has_value()) return result;
  result.joint_state = projected.post_state;

  // Factor the accepted branch across the data|program cut when possible.
  const int d = p.data_shape.total();
  const int m = p.program_shape.total();
  Matrix branch(d, m);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < m; ++j) branch(i, j) = projected.post_state->amp(i * m + j);
  }
  Eigen::JacobiSVD<Matrix> svd(branch, Eigen::ComputeThinU);
  if (1.0 - svd.singularValues()(0) * svd.singularValues()(0) < kStructuralTol) {
    result.data_state = StateVector::normalized(p.data_shape, svd.matrixU().col(0));
  }
  return result;
}

Operator reflection_about(const StateVector& phi) {
  if (phi.dim() != 2) throw std::invalid_argument("reflection_about: phi must be a qubit");
  Matrix m = Matrix::Identity(2, 2) - 2.0 * (phi.amps() * phi.amps().adjoint());
  return Operator::unitary(Shape::qubits(1), std::move(m));
}

namespace {

Operator u0_gate() {
  // |00> -> -|10>, |01> -> |00>, |10> -> -|11>, |11> -> |01>.
  Matrix m = Matrix::Zero(4, 4);
  m(2, 0) = -1.0;
  m(0, 1) = 1.0;
  m(3, 2) = -1.0;
  m(1, 3) = 1.0;
  return Operator::unitary(Shape::qubits(2), std::move(m));
}

}  // namespace

StateVector a_operator_program(const StateVector& phi) {
  if (phi.dim() != 2) throw std::invalid_argument("a_operator_program: phi must be a qubit");
  StateVector perp = qubit_orthogonal(phi);
  Vector sym = (tensor(phi, perp).amps() + tensor(perp, phi).amps()) / std::sqrt(2.0);
  return StateVector(Shape::qubits(2), u0_gate().mat() * sym);
}

Operator a_operator_accept_projector() {
  Vector chi(4);
  chi << 1.0, 2.0, 0.0, -1.0;
  chi /= std::sqrt(6.0);
  return projector_onto(StateVector(Shape::qubits(2), std::move(chi)));
}

std::optional<Operator> channel_unitary(const QuantumChannel& t) {
  const int d = t.dim();
  Eigen::SelfAdjointEigenSolver<Matrix> es(t.process_state().mat());
  if (es.eigenvalues().maxCoeff() < 1.0 - kComposedTol) return std::nullopt;
  Vector top = es.eigenvectors().col(d * d - 1);
  Matrix u(d, d);
  const double scale = std::sqrt(static_cast<double>(d));
  for (int j = 0; j < d; ++j) {
    for (int l = 0; l < d; ++l) u(l, j) = scale * top(j * d + l);
  }
  Matrix gram = u.adjoint() * u;
  gram.diagonal().array() -= 1.0;
  if (gram.cwiseAbs().maxCoeff() > 1e-8) return std::nullopt;
  return Operator::unitary(t.data_shape(), std::move(u));
}

bool nogo_orthogonality_check(const Processor& p, const StateVector& prog1,
                              const StateVector& prog2) {
  std::optional<Operator> u1 = channel_unitary(deterministic_map(p, prog1));
  std::optional<Operator> u2 = channel_unitary(deterministic_map(p, prog2));
  if (!u1.has_value() || !u2.has_value()) {
    throw std::invalid_argument("nogo_orthogonality_check: program does not implement a unitary");
  }
  const double d = static_cast<double>(p.data_shape.total());
  bool distinct = std::abs((u1->mat().adjoint() * u2->mat()).trace()) < d - 1e-8;
  bool orthogonal = std::abs(prog1.amps().dot(prog2.amps())) < 1e-9;
  return distinct && orthogonal;
}

}  // namespace qpm::proc
