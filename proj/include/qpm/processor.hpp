// Programmable-processor framework: a fixed unitary on data (x) program,
// run deterministically (trace out the program, yielding a channel) or
// probabilistically (condition on a program-register projection).
#pragma once

#include <array>
#include <optional>
#include <vector>

#include "qpm/core.hpp"

namespace qpm::proc {

// Trace-preserving completely positive map on a data space, held as a Kraus
// set with its process state cached.
class QuantumChannel {
 public:
  // Requires sum K^dag K = I within kComposedTol.
  QuantumChannel(Shape data_shape, std::vector<Matrix> kraus);
  static QuantumChannel from_unitary(const Operator& u);

  const Shape& data_shape() const { return data_shape_; }
  int dim() const { return data_shape_.total(); }
  const std::vector<Matrix>& kraus() const { return kraus_; }
  // (I (x) T) applied to the maximally entangled pair projector; positive
  // semidefinite with unit trace.
  const DensityOperator& process_state() const { return process_state_; }

  DensityOperator apply(const DensityOperator& rho) const;

 private:
  Shape data_shape_;
  std::vector<Matrix> kraus_;
  DensityOperator process_state_;
};

// (1/sqrt D) sum_j |j>|j> on shape (x) shape.
StateVector maximally_entangled(const Shape& shape);

// Fixed unitary on H_data (x) H_program; the program state selects the
// operation applied to the data.
struct Processor {
  Operator unitary;
  Shape data_shape;
  Shape program_shape;
};

Processor make_processor(Operator u, Shape data_shape, Shape program_shape);

// The cloning circuit as a processor: data = qubit 0, program = qubits 1,2.
Processor cloner_processor();

// Deterministic mode: Kraus operators K_m = (I (x) <m|) U (I (x) |program>)
// over the computational program-output basis.
QuantumChannel deterministic_map(const Processor& p, const StateVector& program);

// Two-qubit program c0(00+11) + c1(01+10) + c2(01-10) + c3(00-11), all over
// sqrt2.  On the cloning processor it realizes the mixed-Pauli channel
// rho -> |c0|^2 rho + |c1|^2 X rho X + |c2|^2 Y rho Y + |c3|^2 Z rho Z.
StateVector pauli_channel_program(const std::array<Complex, 4>& c);

struct ProbabilisticOutcome {
  double probability = 0.0;
  // Accepted branch, normalized; empty when the probability is below
  // kProbFloor.
  std::optional<StateVector> joint_state;
  // Data factor of the accepted branch, present when the branch is a
  // product across the data|program cut (always the case for rank-one
  // accept projectors).
  std::optional<StateVector> data_state;
};

// Probabilistic mode: run the processor, project the program register with
// `accept_projector` (a projector on the program factor), and keep the data
// on success.
ProbabilisticOutcome probabilistic_execute(const Processor& p, const StateVector& program,
                                           const Operator& accept_projector,
                                           const StateVector& data_in);

// I - 2|phi><phi|: flips the phase of |phi> instead of |1>.
Operator reflection_about(const StateVector& phi);

// Program state (1/sqrt2) U0 (|phi>|phi_perp> + |phi_perp>|phi>); feeding it
// to the cloning processor and accepting on a_operator_accept_projector()
// leaves the data in reflection_about(phi)|psi> with probability 1/3,
// independent of phi.
StateVector a_operator_program(const StateVector& phi);
Operator a_operator_accept_projector();

// Unitary implemented by a channel whose process state is rank one; empty
// when the channel is not a unitary conjugation within tolerance.
std::optional<Operator> channel_unitary(const QuantumChannel& t);

// True iff the two programs deterministically implement distinct unitaries
// (up to global phase, via |Tr(U^dag V)| = D within 1e-8) AND the programs
// are orthogonal within 1e-9.  Throws when either program's channel is not
// unitary (the orthogonality statement does not apply).
bool nogo_orthogonality_check(const Processor& p, const StateVector& prog1,
                              const StateVector& prog2);

}  // namespace qpm::proc
