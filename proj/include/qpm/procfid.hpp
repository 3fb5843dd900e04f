// Process-fidelity machinery and the approximate controlled-U processor for
// the one-parameter gate family, including the cyclic shift-group
// construction and its fidelity behaviour.
#pragma once

#include <vector>

#include "qpm/core.hpp"
#include "qpm/processor.hpp"

namespace qpm::procfid {

// Process state (I (x) T)(|Phi><Phi|) of the channel, |Phi> maximally
// entangled.
DensityOperator jamiolkowski(const proc::QuantumChannel& t);

// Uhlmann fidelity [Tr sqrt(sqrt(r1) r2 sqrt(r1))]^2; matrix square roots
// via Hermitian eigendecomposition with small negative eigenvalues clamped
// to zero.
double state_fidelity(const DensityOperator& r1, const DensityOperator& r2);

// State fidelity between the two process states; 1 iff the channels agree.
double process_fidelity(const proc::QuantumChannel& t1, const proc::QuantumChannel& t2);

// Block unitary sum_j U_j (x) |j><j|: basis program |j> implements U_j
// exactly.  All entries must be unitaries of one common dimension.
proc::Processor controlled_u_processor(const std::vector<Operator>& us);

// Index maximizing |Tr(U^dag U_j)| over the processor's basis programs,
// ties broken by the lowest index.  Throws when the processor is not
// controlled-U in the computational program basis.
int best_basis_program(const Operator& u, const proc::Processor& p);

// exp[(i pi/2)(e^{-i theta} s+ + e^{i theta} s-)] with s± = (X ± iY)/2.
Operator u_theta(double theta);

// (1/sqrt N) sum_j e^{-i j theta} |j>; the grid programs theta_m = 2 pi m/N
// are orthonormal.
StateVector theta_program(double theta, int n);

double grid_angle(int m, int n);
int nearest_grid_index(double theta, int n);

// Processor G = exp[(i pi/2)(s+ E- + s- E+)] on qubit (x) N with cyclic
// shifts E±: every grid program |theta_m> implements u_theta(theta_m)
// exactly.
struct ShiftGroupProcessor {
  int n;
  Operator eplus;   // |j> -> |j+1 mod N>
  Operator eminus;  // |j> -> |j-1 mod N>
  Operator g;

  proc::Processor processor() const;
};

ShiftGroupProcessor shift_group_processor(int n);  // requires n >= 2

enum class ProgramStrategy {
  nearest_grid,  // best grid program; fidelity cos^2(theta - theta_m) > cos^2(pi/N)
  direct_theta,  // program |theta> itself; worst-case fidelity 1 - 2/N
};

// Process fidelity between the target u_theta(theta) and the channel the
// shift processor realizes under the chosen program strategy.
double approx_group_fidelity(const ShiftGroupProcessor& sg, double theta, ProgramStrategy strategy);
double approx_group_fidelity(double theta, int n, ProgramStrategy strategy);

}  // namespace qpm::procfid
