// Three-qubit approximate cloning circuit with a tunable information split,
// its anticlone port, and exact-or-fail cloning of a known two-state set.
#pragma once

#include <optional>

#include "qpm/core.hpp"

namespace qpm::cloner {

// Program basis for the splitting circuit.
StateVector xi00_state();  // (|00> + |11>)/sqrt(2); keeps the input at port 1
StateVector xi0x_state();  // |0>(|0> + |1>)/sqrt(2); moves the input to port 2

// Two-qubit program c0*Xi00 + c1*Xi0x.  The basis states overlap by 1/2, so
// normalization reads c0^2 + c1^2 + c0*c1 = 1 (coefficients are real).
class ClonerProgram {
 public:
  ClonerProgram(double c0, double c1);
  static ClonerProgram symmetric();  // c0 = c1 = 1/sqrt(3): equal split

  double c0() const { return c0_; }
  double c1() const { return c1_; }
  StateVector program_state() const;

 private:
  double c0_;
  double c1_;
};

// A known pair of pure qubit states with their absolute overlap.
struct TwoStateSet {
  StateVector psi1;
  StateVector psi2;
  double overlap;  // |<psi1|psi2>|
};

TwoStateSet make_two_state_set(StateVector psi1, StateVector psi2);
// |0> paired with overlap*|0> + sqrt(1-overlap^2)|1>.
TwoStateSet pair_with_overlap(double overlap);

// The three-qubit circuit: four CNOTs, qubit 0 carries the input, qubits 1
// and 2 carry the program.  With program Xi00 the input stays at port 0;
// with Xi0x it moves to port 1 while ports 0,2 end in Xi00.
Operator cloner_circuit();

struct CloneOutputs {
  DensityOperator out1;       // first clone (circuit port 0)
  DensityOperator out2;       // second clone (circuit port 1)
  DensityOperator anticlone;  // port 2 through the fixed sigma_y output rotation
};

CloneOutputs clone(const StateVector& psi, const ClonerProgram& prog);

// Closed-form reduced outputs of the splitting circuit:
//   out1 = (c0^2 + c0 c1)|psi><psi| + (c1^2/2) I
//   out2 = (c1^2 + c0 c1)|psi><psi| + (c0^2/2) I.
Matrix closed_form_output1(const ClonerProgram& prog, const StateVector& psi);
Matrix closed_form_output2(const ClonerProgram& prog, const StateVector& psi);

// <psi_perp| rho_3 |psi_perp> for the symmetric program; 2/3 for every psi.
double anticlone_fidelity(const StateVector& psi);

struct ProbabilisticCloneResult {
  bool success = false;
  std::optional<StateVector> output;  // exact two-qubit copy psi x psi on success
};

// Exact-or-fail cloner for a fixed two-state set: a three-qubit unitary
// (input, blank, success flag) built from the inner-product constraints
//   U|psi_i>|00> = sqrt(p)|psi_i psi_i>|0> + sqrt(1-p)|00>|1>,
// p = 1/(1+overlap), completed to a full unitary.
class ProbabilisticCloner {
 public:
  explicit ProbabilisticCloner(TwoStateSet set);  // throws when overlap ~ 1

  double success_probability() const { return success_probability_; }
  const Operator& unitary() const { return unitary_; }

  // Clone psi_which (which is 1 or 2), sampling the flag measurement.
  ProbabilisticCloneResult run(int which, RngStream& rng) const;

 private:
  TwoStateSet set_;
  StateVector psi2_aligned_;  // psi2 rotated so <psi1|psi2> is real >= 0
  double success_probability_;
  Operator unitary_;
};

ProbabilisticCloneResult probabilistic_clone(const TwoStateSet& set, int which, RngStream& rng);

}  // namespace qpm::cloner
