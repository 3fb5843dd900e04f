#include "qpm/procfid.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qpm::procfid {

namespace {

Matrix psd_sqrt(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(m);
  // Eigenvalues at solver-noise level are clamped to zero before the square
  // root; sqrt(1e-16) noise would otherwise pollute the result at 1e-8.
  const double cutoff = 1e-12 * std::max(1.0, es.eigenvalues().maxCoeff());
  Vector roots(m.rows());
  for (int i = 0; i < m.rows(); ++i) {
    double lambda = es.eigenvalues()(i);
    roots(i) = lambda > cutoff ? std::sqrt(lambda) : 0.0;
  }
  return es.eigenvectors() * roots.asDiagonal() * es.eigenvectors().adjoint();
}

Operator sigma_plus() {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 1) = 1.0;  // (X + iY)/2
  return Operator(Shape::qubits(1), std::move(m));
}

Operator sigma_minus() {
  Matrix m = Matrix::Zero(2, 2);
  m(1, 0) = 1.0;  // (X - iY)/2
  return Operator(Shape::qubits(1), std::move(m));
}

}  // namespace

DensityOperator jamiolkowski(const proc::QuantumChannel& t) { return t.process_state(); }

double state_fidelity(const DensityOperator& r1, const DensityOperator& r2) {
  if (r1.shape().total() != r2.shape().total()) {
    throw std::invalid_argument("state_fidelity: dimension mismatch");
  }
  // [Tr sqrt(sqrt(r1) r2 sqrt(r1))]^2 = [sum of singular values of
  // sqrt(r2) sqrt(r1)]^2; the singular-value route avoids taking square
  // roots of near-zero eigenvalues of the triple product.
  Matrix product = psd_sqrt(r2.mat()) * psd_sqrt(r1.mat());
  Eigen::JacobiSVD<Matrix> svd(product);
  double sum = svd.singularValues().sum();
  return sum * sum;
}

double process_fidelity(const proc::QuantumChannel& t1, const proc::QuantumChannel& t2) {
  if (t1.dim() != t2.dim()) throw std::invalid_argument("process_fidelity: dimension mismatch");
  return state_fidelity(t1.process_state(), t2.process_state());
}

proc::Processor controlled_u_processor(const std::vector<Operator>& us) {
  if (us.empty()) throw std::invalid_argument("controlled_u_processor: no unitaries");
  const int d = us.front().dim();
  for (const Operator& u : us) {
    if (u.dim() != d) throw std::invalid_argument("controlled_u_processor: mixed dimensions");
    if (!u.is_unitary()) throw std::invalid_argument("controlled_u_processor: entry is not unitary");
  }
  const int m = static_cast<int>(us.size());
  Matrix joint = Matrix::Zero(d * m, d * m);
  for (int j = 0; j < m; ++j) {
    for (int row = 0; row < d; ++row) {
      for (int col = 0; col < d; ++col) {
        joint(row * m + j, col * m + j) = us[static_cast<std::size_t>(j)].mat()(row, col);
      }
    }
  }
  Shape program_shape = m > 1 ? Shape::single(m) : Shape();
  Shape joint_shape = tensor(us.front().shape(), program_shape);
  return proc::make_processor(Operator::unitary(std::move(joint_shape), std::move(joint)),
                              us.front().shape(), std::move(program_shape));
}

int best_basis_program(const Operator& u, const proc::Processor& p) {
  const int d = p.data_shape.total();
  const int m = p.program_shape.total();
  if (u.dim() != d) throw std::invalid_argument("best_basis_program: dimension mismatch");
  const Matrix& joint = p.unitary.mat();

  // The processor must be block diagonal over the computational program
  // basis with unitary blocks.
  double off = 0.0;
  for (int row = 0; row < d * m; ++row) {
    for (int col = 0; col < d * m; ++col) {
      if (row % m != col % m) off = std::max(off, std::abs(joint(row, col)));
    }
  }
  if (off > kStructuralTol) {
    throw std::invalid_argument("best_basis_program: processor is not controlled-U");
  }

  int best = 0;
  double best_score = -1.0;
  for (int j = 0; j < m; ++j) {
    Matrix block(d, d);
    for (int row = 0; row < d; ++row) {
      for (int col = 0; col < d; ++col) block(row, col) = joint(row * m + j, col * m + j);
    }
    double score = std::abs((u.mat().adjoint() * block).trace());
    if (score > best_score + 1e-12) {
      best_score = score;
      best = j;
    }
  }
  return best;
}

Operator u_theta(double theta) {
  Matrix h(2, 2);
  h << 0.0, std::exp(Complex(0, -theta)), std::exp(Complex(0, theta)), 0.0;
  return herm_exp(Operator(Shape::qubits(1), std::move(h)), Complex(0, std::numbers::pi / 2));
}

StateVector theta_program(double theta, int n) {
  if (n < 1) throw std::invalid_argument("theta_program: n must be >= 1");
  Vector v(n);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (int j = 0; j < n; ++j) v(j) = scale * std::exp(Complex(0, -j * theta));
  return StateVector(n > 1 ? Shape::single(n) : Shape(), std::move(v));
}

double grid_angle(int m, int n) { return 2.0 * std::numbers::pi * m / n; }

int nearest_grid_index(double theta, int n) {
  if (n < 1) throw std::invalid_argument("nearest_grid_index: n must be >= 1");
  double scaled = theta * n / (2.0 * std::numbers::pi);
  long m = std::lround(scaled);
  return static_cast<int>(((m % n) + n) % n);
}

proc::Processor ShiftGroupProcessor::processor() const {
  return proc::make_processor(g, Shape::qubits(1), Shape::single(n));
}

ShiftGroupProcessor shift_group_processor(int n) {
  if (n < 2) throw std::invalid_argument("shift_group_processor: n must be >= 2");
  std::vector<int> up(static_cast<std::size_t>(n)), down(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    up[static_cast<std::size_t>(j)] = (j + 1) % n;
    down[static_cast<std::size_t>(j)] = (j - 1 + n) % n;
  }
  Operator eplus = Operator::permutation(Shape::single(n), up);
  Operator eminus = Operator::permutation(Shape::single(n), down);
  Matrix generator = tensor(sigma_plus(), eminus).mat() + tensor(sigma_minus(), eplus).mat();
  Operator g = herm_exp(Operator(tensor(Shape::qubits(1), Shape::single(n)), std::move(generator)),
                        Complex(0, std::numbers::pi / 2));
  return ShiftGroupProcessor{n, std::move(eplus), std::move(eminus), std::move(g)};
}

double approx_group_fidelity(const ShiftGroupProcessor& sg, double theta, ProgramStrategy strategy) {
  const int n = sg.n;
  double program_angle =
      strategy == ProgramStrategy::nearest_grid ? grid_angle(nearest_grid_index(theta, n), n) : theta;
  proc::QuantumChannel realized = proc::deterministic_map(sg.processor(), theta_program(program_angle, n));
  return process_fidelity(realized, proc::QuantumChannel::from_unitary(u_theta(theta)));
}

double approx_group_fidelity(double theta, int n, ProgramStrategy strategy) {
  if (n < 2) throw std::invalid_argument("approx_group_fidelity: n must be >= 2");
  return approx_group_fidelity(shift_group_processor(n), theta, strategy);
}

}  // namespace qpm::procfid
