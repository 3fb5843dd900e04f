// Probabilistic programmable implementations of the one-parameter phase
// rotation U(alpha) = exp(i alpha Z): a single-CNOT processor (success 1/2),
// repeat-until-success with doubled-angle programs, and the CNOT+Toffoli
// two-program processor (success 3/4).
#pragma once

#include <vector>

#include "qpm/core.hpp"
#include "qpm/processor.hpp"

namespace qpm::phase {

// exp(i alpha Z) = diag(e^{i alpha}, e^{-i alpha}).
Operator u_alpha(double alpha);

// Program qubit (1/sqrt2)(e^{i alpha}|0> + e^{-i alpha}|1>).
StateVector xi_program(double alpha);

struct PhaseRunRecord {
  int rounds_used = 0;
  bool success = false;
  // On success: U(alpha)|psi> exactly.  On failure: the residual rotated
  // state (no correction is applied after the final round).
  StateVector final_state;
  // Program measurement outcomes per round (basis indices).
  std::vector<int> per_round_outcomes;
};

// CNOT with the data as control and the program as target.
proc::Processor single_shot_processor();
// CNOT(data -> program 1) followed by Toffoli(data, program 1 -> program 2).
proc::Processor toffoli_processor();

// Joint state before the program measurement:
// (U(alpha)|psi>|0> + U^{-1}(alpha)|psi>|1>)/sqrt2.
StateVector single_shot_premeasurement(const StateVector& psi, double alpha);

// Measure the program qubit; outcome 0 (probability 1/2) leaves
// U(alpha)|psi>, outcome 1 leaves U^{-1}(alpha)|psi>.
PhaseRunRecord single_shot(const StateVector& psi, double alpha, RngStream& rng);

// Round k reuses the failed output with the doubled-angle program
// Xi(2^{k-1} alpha); each round succeeds with probability 1/2, so the
// cumulative success probability after k rounds is 1 - 2^{-k}.
PhaseRunRecord repeat_until_success(const StateVector& psi, double alpha, int max_rounds,
                                    RngStream& rng);

// Joint state before the two-qubit program measurement with programs
// Xi(alpha), Xi(2 alpha): the |00>, |01>, |10> branches each hold
// U(alpha)|psi> (up to branch phases), the |11> branch holds
// U^{-1}(3 alpha)|psi>.
StateVector toffoli_premeasurement(const StateVector& psi, double alpha);

// Accept on program outcomes {00, 01, 10} (probability 3/4).
PhaseRunRecord toffoli_processor_run(const StateVector& psi, double alpha, RngStream& rng);

}  // namespace qpm::phase
