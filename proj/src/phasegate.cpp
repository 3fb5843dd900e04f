#include "qpm/phasegate.hpp"

#include <cmath>
#include <stdexcept>

namespace qpm::phase {

namespace {

void require_qubit(const StateVector& psi) {
  if (psi.dim() != 2) throw std::invalid_argument("phase gate: data state must be a single qubit");
}

// Sample a computational-basis measurement of the program register (the
// trailing factor) and return the disentangled data qubit.
struct ProgramMeasurement {
  int outcome;
  StateVector data;
};

ProgramMeasurement measure_program_register(const StateVector& joint, int prog_dim, RngStream& rng) {
  const int data_dim = joint.dim() / prog_dim;
  std::vector<double> probs(static_cast<std::size_t>(prog_dim), 0.0);
  for (int d = 0; d < data_dim; ++d) {
    for (int m = 0; m < prog_dim; ++m) {
      probs[static_cast<std::size_t>(m)] += std::norm(joint.amp(d * prog_dim + m));
    }
  }
  int outcome = sample_outcome(probs, rng);
  Vector data(data_dim);
  for (int d = 0; d < data_dim; ++d) data(d) = joint.amp(d * prog_dim + outcome);
  return ProgramMeasurement{outcome, StateVector::normalized(Shape::qubits(1), std::move(data))};
}

}  // namespace

Operator u_alpha(double alpha) {
  return herm_exp(pauli_z(), Complex(0, alpha));
}

StateVector xi_program(double alpha) {
  Vector v(2);
  const double s = 1.0 / std::sqrt(2.0);
  v << s * std::exp(Complex(0, alpha)), s * std::exp(Complex(0, -alpha));
  return StateVector(Shape::qubits(1), std::move(v));
}

proc::Processor single_shot_processor() {
  return proc::make_processor(cnot(), Shape::qubits(1), Shape::qubits(1));
}

proc::Processor toffoli_processor() {
  const Shape shape = Shape::qubits(3);
  Matrix u = embed(toffoli(), {0, 1, 2}, shape).mat() * embed(cnot(), {0, 1}, shape).mat();
  return proc::make_processor(Operator::unitary(shape, std::move(u)), Shape::qubits(1), Shape::qubits(2));
}

StateVector single_shot_premeasurement(const StateVector& psi, double alpha) {
  require_qubit(psi);
  return apply(cnot(), {0, 1}, tensor(psi, xi_program(alpha)));
}

PhaseRunRecord single_shot(const StateVector& psi, double alpha, RngStream& rng) {
  require_qubit(psi);
  ProgramMeasurement m = measure_program_register(single_shot_premeasurement(psi, alpha), 2, rng);
  return PhaseRunRecord{1, m.outcome == 0, std::move(m.data), {m.outcome}};
}

PhaseRunRecord repeat_until_success(const StateVector& psi, double alpha, int max_rounds,
                                    RngStream& rng) {
  require_qubit(psi);
  if (max_rounds < 1) throw std::invalid_argument("repeat_until_success: max_rounds must be >= 1");
  StateVector current = psi;
  std::vector<int> outcomes;
  double round_angle = alpha;  // doubles after every failure
  for (int round = 1; round <= max_rounds; ++round) {
    ProgramMeasurement m = measure_program_register(single_shot_premeasurement(current, round_angle), 2, rng);
    outcomes.push_back(m.outcome);
    current = std::move(m.data);
    if (m.outcome == 0) return PhaseRunRecord{round, true, std::move(current), std::move(outcomes)};
    round_angle *= 2.0;
  }
  return PhaseRunRecord{max_rounds, false, std::move(current), std::move(outcomes)};
}

StateVector toffoli_premeasurement(const StateVector& psi, double alpha) {
  require_qubit(psi);
  StateVector joint = tensor(tensor(psi, xi_program(alpha)), xi_program(2.0 * alpha));
  joint = apply(cnot(), {0, 1}, joint);
  return apply(toffoli(), {0, 1, 2}, joint);
}

PhaseRunRecord toffoli_processor_run(const StateVector& psi, double alpha, RngStream& rng) {
  ProgramMeasurement m = measure_program_register(toffoli_premeasurement(psi, alpha), 4, rng);
  return PhaseRunRecord{1, m.outcome != 3, std::move(m.data), {m.outcome}};
}

}  // namespace qpm::phase
