#include "qpm/grover.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace qpm::grover {

namespace {

// Index of a single-entry column of a permutation matrix applied to basis
// vector `col`, together with the entry's sign.
struct ColumnHit {
  int row;
  double sign;
};

ColumnHit column_hit(const Matrix& m, int col) {
  for (int row = 0; row < m.rows(); ++row) {
    Complex v = m(row, col);
    if (std::abs(v) > 0.5) return ColumnHit{row, v.real() >= 0 ? 1.0 : -1.0};
  }
  throw std::runtime_error("column_hit: column has no unit entry");
}

int optimal_iterations(int marked, int total) {
  double theta = std::asin(std::sqrt(static_cast<double>(std::max(marked, 1)) / total));
  long k = std::lround(std::numbers::pi / (4.0 * theta) - 0.5);
  return static_cast<int>(std::max(0L, k));
}

}  // namespace

PermutationSet make_permutation_set(int n_objects, std::vector<std::vector<int>> perms) {
  if (n_objects < 2) throw std::invalid_argument("make_permutation_set: need at least 2 objects");
  if (perms.empty()) throw std::invalid_argument("make_permutation_set: no permutations");
  for (const auto& p : perms) {
    if (p.size() != static_cast<std::size_t>(n_objects)) {
      throw std::invalid_argument("make_permutation_set: permutation size mismatch");
    }
    std::vector<bool> hit(static_cast<std::size_t>(n_objects), false);
    for (int v : p) {
      if (v < 0 || v >= n_objects || hit[static_cast<std::size_t>(v)]) {
        throw std::invalid_argument("make_permutation_set: entry is not a bijection");
      }
      hit[static_cast<std::size_t>(v)] = true;
    }
  }
  return PermutationSet{n_objects, std::move(perms)};
}

proc::Processor permutation_processor(const PermutationSet& ps) {
  const int n = ps.n_objects;
  const int m = static_cast<int>(ps.perms.size());
  Shape data_shape = Shape::single(n);
  Shape program_shape = m > 1 ? Shape::single(m) : Shape();
  // Joint index k*M + j maps to sigma_j(k)*M + j.
  std::vector<int> image(static_cast<std::size_t>(n * m));
  for (int k = 0; k < n; ++k) {
    for (int j = 0; j < m; ++j) {
      image[static_cast<std::size_t>(k * m + j)] = ps.perms[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)] * m + j;
    }
  }
  Operator joint = Operator::permutation(tensor(data_shape, program_shape), image);
  return proc::make_processor(std::move(joint), std::move(data_shape), std::move(program_shape));
}

MarkingOracle marking_oracle(const PermutationSet& ps, int k0, int k1) {
  if (k0 < 0 || k0 >= ps.n_objects || k1 < 0 || k1 >= ps.n_objects) {
    throw std::invalid_argument("marking_oracle: object index out of range");
  }
  proc::Processor processor = permutation_processor(ps);
  const int m = static_cast<int>(ps.perms.size());
  const int dim = processor.unitary.dim();
  const Matrix& forward = processor.unitary.mat();

  Matrix oracle = Matrix::Zero(m, m);
  int solutions = 0;
  for (int j = 0; j < m; ++j) {
    const int start = k0 * m + j;
    // Forward: |j>_S |k0>_X lands on |j>_S |sigma_j(k0)>_X.
    ColumnHit mid = column_hit(forward, start);
    // Phase flip conditioned on the data register reading k1.
    double phase = (mid.row / m == k1) ? -1.0 : 1.0;
    // Uncompute with the inverse processor; the data register must return
    // to |k0>, leaving only the program-space phase.
    int back = -1;
    for (int c = 0; c < dim; ++c) {
      if (std::abs(forward(mid.row, c)) > 0.5) {
        back = c;
        break;
      }
    }
    if (back != start) throw std::runtime_error("marking_oracle: data register failed to uncompute");
    oracle(j, j) = phase * mid.sign;
    if (phase < 0) ++solutions;
  }
  return MarkingOracle{Operator(processor.program_shape, std::move(oracle)), solutions};
}

SearchResult grover_search(const Operator& oracle, RngStream& rng) {
  const int m = oracle.dim();
  if (m < 2) throw std::invalid_argument("grover_search: program dimension must be >= 2");
  // The oracle must be a diagonal sign flip.
  std::vector<bool> marked(static_cast<std::size_t>(m), false);
  int marked_count = 0;
  for (int r = 0; r < m; ++r) {
    for (int c = 0; c < m; ++c) {
      Complex v = oracle.mat()(r, c);
      if (r != c) {
        if (std::abs(v) > kStructuralTol) throw std::invalid_argument("grover_search: oracle is not diagonal");
      } else if (std::abs(v - 1.0) > kStructuralTol && std::abs(v + 1.0) > kStructuralTol) {
        throw std::invalid_argument("grover_search: oracle diagonal is not +-1");
      }
    }
    if (oracle.mat()(r, r).real() < 0) {
      marked[static_cast<std::size_t>(r)] = true;
      ++marked_count;
    }
  }

  const int iterations = optimal_iterations(marked_count, m);
  Vector state = Vector::Constant(m, 1.0 / std::sqrt(static_cast<double>(m)));
  for (int it = 0; it < iterations; ++it) {
    state = oracle.mat() * state;
    Complex mean = state.sum() / static_cast<double>(m);
    state = 2.0 * mean * Vector::Ones(m) - state;  // inversion about the mean
  }

  SearchResult result;
  result.iterations = iterations;
  result.processor_uses = 2 * iterations;
  std::vector<double> probs(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    probs[static_cast<std::size_t>(i)] = std::norm(state(i));
    if (marked[static_cast<std::size_t>(i)]) result.success_probability += std::norm(state(i));
  }
  result.found = sample_outcome(probs, rng);
  return result;
}

GroupTable make_group_table(std::vector<std::vector<int>> cayley) {
  const int n = static_cast<int>(cayley.size());
  if (n < 1) throw std::invalid_argument("make_group_table: empty table");
  for (const auto& row : cayley) {
    if (row.size() != static_cast<std::size_t>(n)) throw std::invalid_argument("make_group_table: table is not square");
    for (int v : row) {
      if (v < 0 || v >= n) throw std::invalid_argument("make_group_table: entry out of range");
    }
  }
  auto prod = [&](int a, int b) { return cayley[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)]; };

  int identity = -1;
  for (int e = 0; e < n; ++e) {
    bool ok = true;
    for (int g = 0; g < n && ok; ++g) ok = prod(e, g) == g && prod(g, e) == g;
    if (ok) {
      identity = e;
      break;
    }
  }
  if (identity < 0) throw std::invalid_argument("make_group_table: no identity element");

  std::vector<int> inverses(static_cast<std::size_t>(n), -1);
  for (int g = 0; g < n; ++g) {
    for (int h = 0; h < n; ++h) {
      if (prod(g, h) == identity && prod(h, g) == identity) {
        inverses[static_cast<std::size_t>(g)] = h;
        break;
      }
    }
    if (inverses[static_cast<std::size_t>(g)] < 0) {
      throw std::invalid_argument("make_group_table: missing inverse");
    }
  }

  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      for (int c = 0; c < n; ++c) {
        if (prod(prod(a, b), c) != prod(a, prod(b, c))) {
          throw std::invalid_argument("make_group_table: product is not associative");
        }
      }
    }
  }
  return GroupTable{n, std::move(cayley), identity, std::move(inverses)};
}

GroupTable load_group_table(std::istream& in) {
  int n = 0;
  if (!(in >> n) || n < 1) throw std::invalid_argument("load_group_table: bad order line");
  std::vector<std::vector<int>> cayley(static_cast<std::size_t>(n),
                                       std::vector<int>(static_cast<std::size_t>(n), 0));
  for (int g = 0; g < n; ++g) {
    for (int h = 0; h < n; ++h) {
      if (!(in >> cayley[static_cast<std::size_t>(g)][static_cast<std::size_t>(h)])) {
        throw std::invalid_argument("load_group_table: truncated table");
      }
    }
  }
  return make_group_table(std::move(cayley));
}

GroupTable load_group_table_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("load_group_table_file: cannot open " + path);
  return load_group_table(in);
}

PermutationSet conjugation_permutations(const GroupTable& g) {
  std::vector<std::vector<int>> perms;
  perms.reserve(static_cast<std::size_t>(g.order));
  for (int h = 0; h < g.order; ++h) {
    std::vector<int> perm(static_cast<std::size_t>(g.order));
    int hinv = g.inverses[static_cast<std::size_t>(h)];
    for (int x = 0; x < g.order; ++x) {
      int hx = g.cayley[static_cast<std::size_t>(h)][static_cast<std::size_t>(x)];
      perm[static_cast<std::size_t>(x)] = g.cayley[static_cast<std::size_t>(hx)][static_cast<std::size_t>(hinv)];
    }
    perms.push_back(std::move(perm));
  }
  return make_permutation_set(g.order, std::move(perms));
}

ConjugacyResult conjugacy_search(const GroupTable& g, int g1, int g2, RngStream& rng) {
  if (g1 < 0 || g1 >= g.order || g2 < 0 || g2 >= g.order) {
    throw std::invalid_argument("conjugacy_search: element index out of range");
  }
  MarkingOracle oracle = marking_oracle(conjugation_permutations(g), g1, g2);

  ConjugacyResult result;
  result.solution_count = oracle.solution_count;
  auto conjugates = [&](int h) {
    int hg1 = g.cayley[static_cast<std::size_t>(h)][static_cast<std::size_t>(g1)];
    return g.cayley[static_cast<std::size_t>(hg1)][static_cast<std::size_t>(g.inverses[static_cast<std::size_t>(h)])] == g2;
  };

  constexpr int kMaxAttempts = 5;
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    SearchResult search = grover_search(oracle.op, rng);
    result.processor_uses += search.processor_uses;
    if (conjugates(search.found)) {
      result.witness = search.found;
      return result;
    }
    if (oracle.solution_count == 0) break;  // nothing to find; one bounded attempt
  }
  return result;
}

}  // namespace qpm::grover
