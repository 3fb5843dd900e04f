#include "qpm/progdisc.hpp"

#include <cmath>
#include <stdexcept>

namespace qpm::progdisc {

namespace {

double scale_from_projectors(const Matrix& pbc, const Matrix& pac) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(pbc + pac, Eigen::EigenvaluesOnly);
  return 1.0 / es.eigenvalues().maxCoeff();
}

}  // namespace

Operator antisym_projector(Register first, Register second) {
  if (first == second) throw std::invalid_argument("antisym_projector: pair must be two distinct registers");
  return embed(projector_onto(bell_psi_minus()), {static_cast<int>(first), static_cast<int>(second)},
               Shape::qubits(3));
}

double discriminator_scale() {
  return scale_from_projectors(antisym_projector(Register::b, Register::c).mat(),
                               antisym_projector(Register::a, Register::c).mat());
}

Povm discriminator_povm() {
  Matrix pbc = antisym_projector(Register::b, Register::c).mat();
  Matrix pac = antisym_projector(Register::a, Register::c).mat();
  double scale = scale_from_projectors(pbc, pac);
  Matrix pi1 = scale * pbc;
  Matrix pi2 = scale * pac;
  Matrix fail = Matrix::Identity(8, 8) - pi1 - pi2;
  return Povm(Shape::qubits(3), {std::move(pi1), std::move(pi2), std::move(fail)},
              {"identify-1", "identify-2", "fail"});
}

StateVector joint_state(const StateVector& psi1, const StateVector& psi2, int which) {
  if (psi1.dim() != 2 || psi2.dim() != 2) throw std::invalid_argument("joint_state: inputs must be qubits");
  if (which != 1 && which != 2) throw std::invalid_argument("joint_state: which must be 1 or 2");
  return tensor(tensor(psi1, psi2), which == 1 ? psi1 : psi2);
}

DiscriminatorInstance make_instance(StateVector psi1, StateVector psi2, int which) {
  StateVector joint = joint_state(psi1, psi2, which);
  return DiscriminatorInstance{std::move(psi1), std::move(psi2), which, std::move(joint)};
}

double instance_success_probability(const StateVector& psi1, const StateVector& psi2) {
  Povm povm = discriminator_povm();
  return povm_probabilities(joint_state(psi1, psi2, 1), povm)[0];
}

MonteCarloStats run_monte_carlo(long long trials, RngStream& rng) {
  if (trials < 1) throw std::invalid_argument("run_monte_carlo: trials must be >= 1");
  const Povm povm = discriminator_povm();
  MonteCarloStats stats;
  stats.trials = trials;
  for (long long t = 0; t < trials; ++t) {
    DiscriminatorInstance instance = make_instance(haar_random_qubit(rng), haar_random_qubit(rng),
                                                   rng.uniform() < 0.5 ? 1 : 2);
    int outcome = sample_outcome(povm_probabilities(instance.joint, povm), rng);
    if (outcome == 2) {
      ++stats.failures;
    } else if (outcome + 1 == instance.which) {
      ++stats.successes;
    } else {
      ++stats.misidentifications;
    }
  }
  return stats;
}

double average_success(long long trials, RngStream& rng) {
  if (trials < 10000) throw std::invalid_argument("average_success: needs at least 10^4 trials");
  return run_monte_carlo(trials, rng).success_rate();
}

}  // namespace qpm::progdisc
