#include "qpm/discrimination.hpp"

#include <cmath>
#include <stdexcept>

namespace qpm::discrim {

namespace {

constexpr double kTieTol = 1e-12;

Matrix pure_projector(const StateVector& psi) { return psi.amps() * psi.amps().adjoint(); }

}  // namespace

DiscriminationStrategy helstrom_povm(const cloner::TwoStateSet& set) {
  Matrix delta = pure_projector(set.psi1) - pure_projector(set.psi2);
  Eigen::SelfAdjointEigenSolver<Matrix> es(delta);
  Matrix pi1 = Matrix::Zero(2, 2);
  Matrix pi2 = Matrix::Zero(2, 2);
  for (int i = 0; i < 2; ++i) {
    Matrix term = es.eigenvectors().col(i) * es.eigenvectors().col(i).adjoint();
    if (es.eigenvalues()(i) > -kTieTol) {
      pi1 += term;
    } else {
      pi2 += term;
    }
  }
  Povm povm(Shape::qubits(1), {std::move(pi1), std::move(pi2)}, {"identify-1", "identify-2"});
  return DiscriminationStrategy{StrategyKind::minimum_error, std::move(povm)};
}

DiscriminationStrategy usd_povm(const cloner::TwoStateSet& set) {
  if (set.overlap > 1.0 - 1e-9) {
    throw std::invalid_argument("usd_povm: states are indistinguishable");
  }
  Matrix comp1 = pure_projector(qubit_orthogonal(set.psi1));
  Matrix comp2 = pure_projector(qubit_orthogonal(set.psi2));
  // Largest q with I - q(comp1 + comp2) >= 0.
  Eigen::SelfAdjointEigenSolver<Matrix> es(comp1 + comp2, Eigen::EigenvaluesOnly);
  double q = 1.0 / es.eigenvalues().maxCoeff();
  Matrix pi1 = q * comp2;  // supported away from psi2, so it flags psi1
  Matrix pi2 = q * comp1;
  Matrix fail = Matrix::Identity(2, 2) - pi1 - pi2;
  Povm povm(Shape::qubits(1), {std::move(pi1), std::move(pi2), std::move(fail)},
            {"identify-1", "identify-2", "fail"});
  return DiscriminationStrategy{StrategyKind::unambiguous, std::move(povm)};
}

double helstrom_error(double overlap) {
  return 0.5 * (1.0 - std::sqrt(std::max(0.0, 1.0 - overlap * overlap)));
}

double usd_success(double overlap) { return 1.0 - overlap; }

double SimulationTable::error_rate() const {
  return static_cast<double>(counts[0][1] + counts[1][0]) / static_cast<double>(trials);
}

double SimulationTable::success_rate() const {
  return static_cast<double>(counts[0][0] + counts[1][1]) / static_cast<double>(trials);
}

double SimulationTable::failure_rate() const {
  return static_cast<double>(counts[0][2] + counts[1][2]) / static_cast<double>(trials);
}

long long SimulationTable::misidentifications() const { return counts[0][1] + counts[1][0]; }

SimulationTable simulate(const DiscriminationStrategy& strategy, const cloner::TwoStateSet& set,
                         long long trials, RngStream& rng) {
  if (trials < 1) throw std::invalid_argument("simulate: trials must be >= 1");
  SimulationTable table;
  table.trials = trials;
  const std::vector<double> probs1 = povm_probabilities(set.psi1, strategy.povm);
  const std::vector<double> probs2 = povm_probabilities(set.psi2, strategy.povm);
  for (long long t = 0; t < trials; ++t) {
    int which = rng.uniform() < 0.5 ? 0 : 1;
    int outcome = sample_outcome(which == 0 ? probs1 : probs2, rng);
    ++table.counts[static_cast<std::size_t>(which)][static_cast<std::size_t>(outcome)];
  }
  return table;
}

}  // namespace qpm::discrim
