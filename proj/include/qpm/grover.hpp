// Grover search over a quantum program register selecting permutations, and
// the conjugacy-problem reduction for small groups given by Cayley tables.
#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qpm/core.hpp"
#include "qpm/processor.hpp"

namespace qpm::grover {

struct PermutationSet {
  int n_objects = 0;
  std::vector<std::vector<int>> perms;  // each entry a bijection on {0..n_objects-1}
};

// Validates that every entry is a bijection.
PermutationSet make_permutation_set(int n_objects, std::vector<std::vector<int>> perms);

// |k>_X |j>_S -> |sigma_j(k)>_X |j>_S: data register X holds the object,
// program register S selects the permutation.  A permutation matrix on the
// joint space.
proc::Processor permutation_processor(const PermutationSet& ps);

struct MarkingOracle {
  Operator op;             // diagonal +-1 phase oracle on the program space
  int solution_count = 0;  // permutations with sigma(k0) = k1
  bool promise_holds() const { return solution_count == 1; }
};

// Compute-phase-uncompute through the processor: run |j>_S |k0>_X forward,
// flip the sign when the data register reads k1, run the inverse.  The data
// register returns to |k0> disentangled, leaving a program-space phase
// oracle.  A violated single-solution promise is reported via
// solution_count, not an error; the search still runs.
MarkingOracle marking_oracle(const PermutationSet& ps, int k0, int k1);

struct SearchResult {
  int found = -1;
  int iterations = 0;
  int processor_uses = 0;  // two per oracle application (compute + uncompute)
  double success_probability = 0.0;  // final weight on the marked set
};

// Uniform start, then `iterations` rounds of oracle followed by inversion
// about the mean, with iterations = round(pi/(4 asin(sqrt(t/M))) - 1/2) for
// t marked out of M (t taken as 1 when nothing is marked).  The returned
// index is sampled from the final amplitudes.
SearchResult grover_search(const Operator& oracle, RngStream& rng);

struct GroupTable {
  int order = 0;
  std::vector<std::vector<int>> cayley;  // cayley[g][h] = index of g*h
  int identity = -1;
  std::vector<int> inverses;
};

// Validates the group axioms (identity, inverses, associativity) and fills
// in the derived fields.
GroupTable make_group_table(std::vector<std::vector<int>> cayley);

// Plain-text format: first line the order n, then n lines of n indices
// (row g, column h holds the index of g*h).
GroupTable load_group_table(std::istream& in);
GroupTable load_group_table_file(const std::string& path);

// For each h in G, the permutation g -> h g h^{-1}.
PermutationSet conjugation_permutations(const GroupTable& g);

struct ConjugacyResult {
  std::optional<int> witness;  // h with h g1 h^{-1} = g2, verified on the table
  int processor_uses = 0;
  int solution_count = 0;  // classical witness count (drives the iteration rule)
};

// Grover search over the conjugation permutations with k0 = g1, k1 = g2.
// Candidate witnesses are checked against the table; a few independent
// attempts cover the measurement's residual failure probability.
ConjugacyResult conjugacy_search(const GroupTable& g, int g1, int g2, RngStream& rng);

}  // namespace qpm::grover
