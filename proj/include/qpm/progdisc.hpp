// Programmable unambiguous discriminator: two program qubits carry the
// candidate states, one data qubit carries the unknown, and a symmetry
// POVM built from two-qubit antisymmetric projectors identifies the data
// with average success 1/6 over uniformly random candidate pairs.
#pragma once

#include "qpm/core.hpp"

namespace qpm::progdisc {

// Register layout: program a = qubit 0, program b = qubit 1, data c = qubit 2.
enum class Register { a = 0, b = 1, c = 2 };

// Singlet projector on the chosen pair, identity on the remaining qubit.
// Vanishes on any symmetric (in particular equal-state product) input.
Operator antisym_projector(Register first, Register second);

// {identify-1, identify-2, fail}: identify-1 is the antisymmetric projector
// on (b,c), identify-2 the one on (a,c), both scaled by the largest factor
// keeping the fail element positive semidefinite (the factor is 2/3).
Povm discriminator_povm();
double discriminator_scale();

// One discrimination task: candidate states on the program registers, the
// hidden truth, and the assembled three-qubit input.
struct DiscriminatorInstance {
  StateVector psi1;
  StateVector psi2;
  int which;          // hidden truth, 1 or 2
  StateVector joint;  // |psi1>_a |psi2>_b |psi_which>_c
};

DiscriminatorInstance make_instance(StateVector psi1, StateVector psi2, int which);

// Joint state |psi1>_a |psi2>_b |psi_which>_c.
StateVector joint_state(const StateVector& psi1, const StateVector& psi2, int which);

// Probability of correctly identifying the data for this candidate pair
// (equal for which = 1 and 2): (1 - |<psi1|psi2>|^2)/3.
double instance_success_probability(const StateVector& psi1, const StateVector& psi2);

struct MonteCarloStats {
  long long trials = 0;
  long long successes = 0;
  long long misidentifications = 0;
  long long failures = 0;

  double success_rate() const { return static_cast<double>(successes) / static_cast<double>(trials); }
};

// Haar-random candidate pairs, equiprobable hidden label, sampled POVM.
MonteCarloStats run_monte_carlo(long long trials, RngStream& rng);

// Average correct-identification rate; converges to 1/6.  Requires at
// least 10^4 trials.
double average_success(long long trials, RngStream& rng);

}  // namespace qpm::progdisc
