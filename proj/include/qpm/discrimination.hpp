// Two-state discrimination machines: minimum-error and unambiguous
// measurements for equiprobable pure qubit pairs, with exact probabilities
// and Monte Carlo simulation.
#pragma once

#include <array>

#include "qpm/cloner.hpp"
#include "qpm/core.hpp"

namespace qpm::discrim {

enum class StrategyKind { minimum_error, unambiguous };

// Priors are fixed at 1/2, 1/2.  minimum_error carries two outcomes,
// unambiguous three (identify-1, identify-2, fail).
struct DiscriminationStrategy {
  StrategyKind kind;
  Povm povm;
};

// Projectors onto the positive/negative eigenspaces of
// |psi1><psi1| - |psi2><psi2|; ties (degenerate zero eigenvalues) go to
// outcome 1, so identical states give error probability 1/2.
DiscriminationStrategy helstrom_povm(const cloner::TwoStateSet& set);

// Flag elements proportional to the projectors onto the complements of the
// other state, scaled by the largest factor that keeps the failure element
// positive semidefinite.  Never misidentifies.
DiscriminationStrategy usd_povm(const cloner::TwoStateSet& set);

// Closed forms for equal priors.
double helstrom_error(double overlap);  // (1 - sqrt(1 - overlap^2)) / 2
double usd_success(double overlap);     // 1 - overlap

struct SimulationTable {
  long long trials = 0;
  // counts[w][o]: prepared state w in {0,1}, outcome o in
  // {identify-1, identify-2, fail}.
  std::array<std::array<long long, 3>, 2> counts{};

  double error_rate() const;
  double success_rate() const;
  double failure_rate() const;
  long long misidentifications() const;
};

// Draw the prepared state uniformly each trial and sample the measurement.
SimulationTable simulate(const DiscriminationStrategy& strategy, const cloner::TwoStateSet& set,
                         long long trials, RngStream& rng);

}  // namespace qpm::discrim
