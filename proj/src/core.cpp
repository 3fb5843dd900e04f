#include "qpm/core.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qpm {

namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

std::uint64_t splitmix64(std::uint64_t x) {
  x += kGolden;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

void check_square(const Shape& shape, const Matrix& mat, const char* what) {
  if (mat.rows() != shape.total() || mat.cols() != shape.total()) {
    throw std::invalid_argument(std::string(what) + ": matrix size does not match shape");
  }
}

double hermiticity_defect(const Matrix& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

double min_eigenvalue(const Matrix& hermitian) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

void validate_targets(const Shape& shape, const std::vector<int>& targets, const Shape& op_shape) {
  if (targets.size() != static_cast<std::size_t>(op_shape.count())) {
    throw std::invalid_argument("apply: target count does not match operator shape");
  }
  std::vector<bool> seen(static_cast<std::size_t>(shape.count()), false);
  for (std::size_t j = 0; j < targets.size(); ++j) {
    int t = targets[j];
    if (t < 0 || t >= shape.count()) throw std::invalid_argument("apply: target index out of range");
    if (seen[static_cast<std::size_t>(t)]) throw std::invalid_argument("apply: duplicate target index");
    seen[static_cast<std::size_t>(t)] = true;
    if (shape.dim(t) != op_shape.dim(static_cast<int>(j))) {
      throw std::invalid_argument("apply: operator dimension does not match targeted subsystem");
    }
  }
}

// Global offsets of the operator's multi-index within the host shape, plus
// the base indices where every targeted digit is zero.  Together these tile
// the host basis: index = base + offset[m].
struct EmbedPlan {
  std::vector<int> offsets;
  std::vector<int> bases;
};

EmbedPlan make_embed_plan(const Shape& shape, const std::vector<int>& targets, const Shape& op_shape) {
  EmbedPlan plan;
  const auto strides = shape.strides();
  const auto op_strides = op_shape.strides();
  const int op_dim = op_shape.total();
  plan.offsets.resize(static_cast<std::size_t>(op_dim));
  for (int m = 0; m < op_dim; ++m) {
    int off = 0;
    for (std::size_t j = 0; j < targets.size(); ++j) {
      int digit = (m / op_strides[j]) % op_shape.dim(static_cast<int>(j));
      off += digit * strides[static_cast<std::size_t>(targets[j])];
    }
    plan.offsets[static_cast<std::size_t>(m)] = off;
  }
  plan.bases.reserve(static_cast<std::size_t>(shape.total() / op_dim));
  for (int idx = 0; idx < shape.total(); ++idx) {
    bool base = true;
    for (int t : targets) {
      if (shape.digit(idx, t) != 0) {
        base = false;
        break;
      }
    }
    if (base) plan.bases.push_back(idx);
  }
  return plan;
}

Vector apply_to_vector(const Operator& op, const std::vector<int>& targets, const Shape& shape,
                       const Vector& in) {
  const EmbedPlan plan = make_embed_plan(shape, targets, op.shape());
  const int op_dim = op.dim();
  Vector out = Vector::Zero(in.size());
  Vector gathered(op_dim);
  Vector scattered(op_dim);
  for (int base : plan.bases) {
    for (int m = 0; m < op_dim; ++m) gathered(m) = in(base + plan.offsets[static_cast<std::size_t>(m)]);
    scattered.noalias() = op.mat() * gathered;
    for (int m = 0; m < op_dim; ++m) out(base + plan.offsets[static_cast<std::size_t>(m)]) = scattered(m);
  }
  return out;
}

}  // namespace

// --- Shape ------------------------------------------------------------------

Shape::Shape(std::vector<int> dims) : dims_(std::move(dims)) {
  total_ = 1;
  for (int d : dims_) {
    if (d < 2) throw std::invalid_argument("Shape: every subsystem dimension must be >= 2");
    if (total_ > (1 << 24) / d) throw std::invalid_argument("Shape: total dimension too large");
    total_ *= d;
  }
}

Shape Shape::qubits(int n) {
  if (n < 0) throw std::invalid_argument("Shape::qubits: negative count");
  return Shape(std::vector<int>(static_cast<std::size_t>(n), 2));
}

Shape Shape::single(int dim) { return Shape({dim}); }

std::vector<int> Shape::strides() const {
  std::vector<int> s(dims_.size());
  int acc = 1;
  for (int i = count() - 1; i >= 0; --i) {
    s[static_cast<std::size_t>(i)] = acc;
    acc *= dims_[static_cast<std::size_t>(i)];
  }
  return s;
}

int Shape::digit(int index, int i) const {
  int stride = 1;
  for (int k = count() - 1; k > i; --k) stride *= dims_[static_cast<std::size_t>(k)];
  return (index / stride) % dims_[static_cast<std::size_t>(i)];
}

Shape tensor(const Shape& a, const Shape& b) {
  std::vector<int> dims = a.dims();
  dims.insert(dims.end(), b.dims().begin(), b.dims().end());
  return Shape(std::move(dims));
}

// --- StateVector -------------------------------------------------------------

StateVector::StateVector(Shape shape, Vector amps) : shape_(std::move(shape)), amps_(std::move(amps)) {
  if (amps_.size() != shape_.total()) {
    throw std::invalid_argument("StateVector: amplitude count does not match shape");
  }
  if (std::abs(amps_.norm() - 1.0) > kStructuralTol) {
    throw std::invalid_argument("StateVector: amplitudes are not normalized");
  }
}

StateVector StateVector::normalized(Shape shape, Vector amps) {
  double n = amps.norm();
  if (n < kProbFloor) throw std::invalid_argument("StateVector::normalized: zero vector");
  return StateVector(std::move(shape), amps / n);
}

// --- DensityOperator ----------------------------------------------------------

DensityOperator::DensityOperator(Shape shape, Matrix mat) : shape_(std::move(shape)), mat_(std::move(mat)) {
  check_square(shape_, mat_, "DensityOperator");
  if (hermiticity_defect(mat_) > kStructuralTol) {
    throw std::invalid_argument("DensityOperator: matrix is not Hermitian");
  }
  if (std::abs(mat_.trace().real() - 1.0) > kStructuralTol || std::abs(mat_.trace().imag()) > kStructuralTol) {
    throw std::invalid_argument("DensityOperator: trace is not 1");
  }
  if (min_eigenvalue(mat_) < -kStructuralTol) {
    throw std::invalid_argument("DensityOperator: matrix is not positive semidefinite");
  }
}

DensityOperator DensityOperator::from_pure(const StateVector& psi) {
  return DensityOperator(psi.shape(), psi.amps() * psi.amps().adjoint());
}

// --- Operator ------------------------------------------------------------------

Operator::Operator(Shape shape, Matrix mat) : shape_(std::move(shape)), mat_(std::move(mat)) {
  check_square(shape_, mat_, "Operator");
}

Operator::Operator(Shape shape, Matrix mat, VerifiedUnitaryTag) : Operator(std::move(shape), std::move(mat)) {
  unitary_ = true;
}

Operator Operator::unitary(Shape shape, Matrix mat) {
  Operator op(std::move(shape), std::move(mat));
  if (!op.is_unitary()) throw std::invalid_argument("Operator::unitary: matrix is not unitary");
  return op;
}

Operator Operator::permutation(Shape shape, const std::vector<int>& image) {
  const int d = shape.total();
  if (image.size() != static_cast<std::size_t>(d)) {
    throw std::invalid_argument("Operator::permutation: image size does not match shape");
  }
  std::vector<bool> hit(static_cast<std::size_t>(d), false);
  for (int v : image) {
    if (v < 0 || v >= d || hit[static_cast<std::size_t>(v)]) {
      throw std::invalid_argument("Operator::permutation: image is not a bijection");
    }
    hit[static_cast<std::size_t>(v)] = true;
  }
  Matrix m = Matrix::Zero(d, d);
  for (int j = 0; j < d; ++j) m(image[static_cast<std::size_t>(j)], j) = 1.0;
  return Operator(std::move(shape), std::move(m), VerifiedUnitaryTag{});
}

Operator Operator::identity(Shape shape) {
  const int d = shape.total();
  return Operator(std::move(shape), Matrix::Identity(d, d), VerifiedUnitaryTag{});
}

bool Operator::is_unitary() const {
  if (!unitary_.has_value()) {
    Matrix g = mat_.adjoint() * mat_;
    g.diagonal().array() -= 1.0;
    unitary_ = g.cwiseAbs().maxCoeff() <= kStructuralTol;
  }
  return *unitary_;
}

Operator Operator::adjoint() const {
  Operator op(shape_, mat_.adjoint());
  op.unitary_ = unitary_;
  return op;
}

// --- Povm -------------------------------------------------------------------

Povm::Povm(Shape shape, std::vector<Matrix> elements, std::vector<std::string> labels)
    : shape_(std::move(shape)), elements_(std::move(elements)), labels_(std::move(labels)) {
  if (elements_.empty()) throw std::invalid_argument("Povm: no elements");
  if (labels_.size() != elements_.size()) throw std::invalid_argument("Povm: label count mismatch");
  Matrix sum = Matrix::Zero(shape_.total(), shape_.total());
  for (const Matrix& e : elements_) {
    check_square(shape_, e, "Povm element");
    if (hermiticity_defect(e) > kStructuralTol) throw std::invalid_argument("Povm: element not Hermitian");
    if (min_eigenvalue(e) < -kStructuralTol) throw std::invalid_argument("Povm: element not PSD");
    sum += e;
  }
  sum.diagonal().array() -= 1.0;
  if (sum.cwiseAbs().maxCoeff() > kStructuralTol) {
    throw std::invalid_argument("Povm: elements do not sum to identity");
  }
}

// --- RngStream -----------------------------------------------------------------

RngStream::RngStream(std::uint64_t seed) : seed_(seed), engine_(seed) {}

double RngStream::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double RngStream::gaussian() {
  // Box-Muller; u1 shifted away from zero so the log is finite.
  double u1 = 1.0 - uniform();
  double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

RngStream RngStream::fork(std::uint64_t salt) const {
  return RngStream(splitmix64(seed_ ^ splitmix64(salt)));
}

// --- tensor products ------------------------------------------------------------

StateVector tensor(const StateVector& a, const StateVector& b) {
  Vector out(a.dim() * b.dim());
  for (int i = 0; i < a.dim(); ++i) out.segment(i * b.dim(), b.dim()) = a.amp(i) * b.amps();
  return StateVector(tensor(a.shape(), b.shape()), std::move(out));
}

Operator tensor(const Operator& a, const Operator& b) {
  const int da = a.dim();
  const int db = b.dim();
  Matrix out(da * db, da * db);
  for (int i = 0; i < da; ++i) {
    for (int j = 0; j < da; ++j) out.block(i * db, j * db, db, db) = a.mat()(i, j) * b.mat();
  }
  return Operator(tensor(a.shape(), b.shape()), std::move(out));
}

DensityOperator tensor(const DensityOperator& a, const DensityOperator& b) {
  const int da = a.dim();
  const int db = b.dim();
  Matrix out(da * db, da * db);
  for (int i = 0; i < da; ++i) {
    for (int j = 0; j < da; ++j) out.block(i * db, j * db, db, db) = a.mat()(i, j) * b.mat();
  }
  return DensityOperator(tensor(a.shape(), b.shape()), std::move(out));
}

// --- partial trace ---------------------------------------------------------------

DensityOperator partial_trace(const DensityOperator& rho, const std::vector<int>& keep_in) {
  const Shape& shape = rho.shape();
  if (keep_in.empty()) throw std::invalid_argument("partial_trace: keep set is empty");
  std::vector<int> keep = keep_in;
  std::sort(keep.begin(), keep.end());
  if (std::adjacent_find(keep.begin(), keep.end()) != keep.end()) {
    throw std::invalid_argument("partial_trace: duplicate keep index");
  }
  if (keep.front() < 0 || keep.back() >= shape.count()) {
    throw std::invalid_argument("partial_trace: keep index out of range");
  }

  std::vector<int> kept_dims;
  kept_dims.reserve(keep.size());
  for (int k : keep) kept_dims.push_back(shape.dim(k));
  Shape out_shape(kept_dims);

  // Split each joint index into (kept part, traced part) once up front.
  const int d = shape.total();
  std::vector<int> kept_of(static_cast<std::size_t>(d)), traced_of(static_cast<std::size_t>(d));
  const auto strides = shape.strides();
  std::vector<int> kept_strides(static_cast<std::size_t>(shape.count()), -1);
  {
    int acc = 1;
    for (int i = static_cast<int>(keep.size()) - 1; i >= 0; --i) {
      kept_strides[static_cast<std::size_t>(keep[static_cast<std::size_t>(i)])] = acc;
      acc *= shape.dim(keep[static_cast<std::size_t>(i)]);
    }
  }
  for (int idx = 0; idx < d; ++idx) {
    int kpart = 0, tpart = 0, tacc = 1;
    for (int i = shape.count() - 1; i >= 0; --i) {
      int digit = (idx / strides[static_cast<std::size_t>(i)]) % shape.dim(i);
      if (kept_strides[static_cast<std::size_t>(i)] >= 0) {
        kpart += digit * kept_strides[static_cast<std::size_t>(i)];
      } else {
        tpart += digit * tacc;
        tacc *= shape.dim(i);
      }
    }
    kept_of[static_cast<std::size_t>(idx)] = kpart;
    traced_of[static_cast<std::size_t>(idx)] = tpart;
  }

  Matrix out = Matrix::Zero(out_shape.total(), out_shape.total());
  for (int r = 0; r < d; ++r) {
    for (int c = 0; c < d; ++c) {
      if (traced_of[static_cast<std::size_t>(r)] == traced_of[static_cast<std::size_t>(c)]) {
        out(kept_of[static_cast<std::size_t>(r)], kept_of[static_cast<std::size_t>(c)]) += rho.mat()(r, c);
      }
    }
  }
  return DensityOperator(std::move(out_shape), std::move(out));
}

// --- apply ------------------------------------------------------------------------

StateVector apply(const Operator& op, const std::vector<int>& targets, const StateVector& s) {
  validate_targets(s.shape(), targets, op.shape());
  if (!op.is_unitary()) throw std::invalid_argument("apply: operator is not unitary");
  Vector out = apply_to_vector(op, targets, s.shape(), s.amps());
  return StateVector(s.shape(), std::move(out));
}

DensityOperator apply(const Operator& op, const std::vector<int>& targets, const DensityOperator& rho) {
  validate_targets(rho.shape(), targets, op.shape());
  if (!op.is_unitary()) throw std::invalid_argument("apply: operator is not unitary");
  const int d = rho.dim();
  // E rho E^dag one column at a time: a = E rho, then E a^dag = E rho E^dag
  // (rho Hermitian).
  Matrix a(d, d);
  for (int c = 0; c < d; ++c) a.col(c) = apply_to_vector(op, targets, rho.shape(), rho.mat().col(c));
  Matrix b = a.adjoint();
  for (int c = 0; c < d; ++c) a.col(c) = apply_to_vector(op, targets, rho.shape(), b.col(c));
  return DensityOperator(rho.shape(), std::move(a));
}

Operator embed(const Operator& op, const std::vector<int>& targets, const Shape& shape) {
  validate_targets(shape, targets, op.shape());
  const int d = shape.total();
  Matrix out = Matrix::Zero(d, d);
  Vector e = Vector::Zero(d);
  for (int c = 0; c < d; ++c) {
    e(c) = 1.0;
    out.col(c) = apply_to_vector(op, targets, shape, e);
    e(c) = 0.0;
  }
  return Operator(shape, std::move(out));
}

// --- measurement -------------------------------------------------------------------

ProjectiveOutcome measure_projective(const StateVector& s, const Operator& projector,
                                     const std::vector<int>& targets) {
  validate_targets(s.shape(), targets, projector.shape());
  const Matrix& p = projector.mat();
  if (hermiticity_defect(p) > kStructuralTol) {
    throw std::invalid_argument("measure_projective: projector is not Hermitian");
  }
  if ((p * p - p).cwiseAbs().maxCoeff() > kStructuralTol) {
    throw std::invalid_argument("measure_projective: projector is not idempotent");
  }
  Vector projected = apply_to_vector(projector, targets, s.shape(), s.amps());
  double prob = projected.squaredNorm();
  ProjectiveOutcome outcome;
  outcome.probability = prob;
  if (prob > kProbFloor) {
    outcome.post_state = StateVector(s.shape(), projected / std::sqrt(prob));
  }
  return outcome;
}

std::vector<double> povm_probabilities(const DensityOperator& rho, const Povm& povm) {
  if (rho.shape() != povm.shape()) throw std::invalid_argument("povm_probabilities: shape mismatch");
  std::vector<double> probs;
  probs.reserve(povm.elements().size());
  for (const Matrix& e : povm.elements()) probs.push_back((e * rho.mat()).trace().real());
  return probs;
}

std::vector<double> povm_probabilities(const StateVector& psi, const Povm& povm) {
  if (psi.shape() != povm.shape()) throw std::invalid_argument("povm_probabilities: shape mismatch");
  std::vector<double> probs;
  probs.reserve(povm.elements().size());
  for (const Matrix& e : povm.elements()) {
    probs.push_back((psi.amps().adjoint() * e * psi.amps())(0).real());
  }
  return probs;
}

int sample_outcome(const std::vector<double>& probs, RngStream& rng) {
  if (probs.empty()) throw std::invalid_argument("sample_outcome: empty distribution");
  double sum = 0.0;
  for (double p : probs) {
    if (p < -kProbFloor) throw std::invalid_argument("sample_outcome: negative probability");
    sum += std::max(p, 0.0);
  }
  if (std::abs(sum - 1.0) > 1e-8) throw std::invalid_argument("sample_outcome: probabilities do not sum to 1");
  double u = rng.uniform() * sum;
  double acc = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    acc += std::max(probs[i], 0.0);
    if (u < acc) return static_cast<int>(i);
  }
  return static_cast<int>(probs.size()) - 1;
}

StateVector haar_random_qubit(RngStream& rng) {
  while (true) {
    Vector v(2);
    double re0 = rng.gaussian(), im0 = rng.gaussian();
    double re1 = rng.gaussian(), im1 = rng.gaussian();
    v << Complex(re0, im0), Complex(re1, im1);
    double n = v.norm();
    if (n > 1e-8) return StateVector(Shape::qubits(1), v / n);
  }
}

Operator herm_exp(const Operator& h, Complex scale) {
  if (hermiticity_defect(h.mat()) > kStructuralTol) {
    throw std::invalid_argument("herm_exp: matrix is not Hermitian");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(h.mat());
  Vector phases(h.dim());
  for (int i = 0; i < h.dim(); ++i) phases(i) = std::exp(scale * es.eigenvalues()(i));
  Matrix out = es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
  return Operator(h.shape(), std::move(out));
}

// --- gates and states -----------------------------------------------------------------

namespace {

Operator qubit_gate(std::initializer_list<Complex> entries) {
  Matrix m(2, 2);
  auto it = entries.begin();
  m << *it, *(it + 1), *(it + 2), *(it + 3);
  return Operator::unitary(Shape::qubits(1), std::move(m));
}

StateVector qubit_state(Complex a0, Complex a1) {
  Vector v(2);
  v << a0, a1;
  return StateVector(Shape::qubits(1), std::move(v));
}

StateVector two_qubit_state(Complex a00, Complex a01, Complex a10, Complex a11) {
  Vector v(4);
  v << a00, a01, a10, a11;
  return StateVector(Shape::qubits(2), std::move(v));
}

}  // namespace

Operator pauli_x() { return qubit_gate({0, 1, 1, 0}); }
Operator pauli_y() { return qubit_gate({0, Complex(0, -1), Complex(0, 1), 0}); }
Operator pauli_z() { return qubit_gate({1, 0, 0, -1}); }
Operator hadamard() {
  const double s = 1.0 / std::sqrt(2.0);
  return qubit_gate({s, s, s, -s});
}

Operator cnot() { return Operator::permutation(Shape::qubits(2), {0, 1, 3, 2}); }
Operator toffoli() { return Operator::permutation(Shape::qubits(3), {0, 1, 2, 3, 4, 5, 7, 6}); }

StateVector basis_state(const Shape& shape, int index) {
  if (index < 0 || index >= shape.total()) throw std::invalid_argument("basis_state: index out of range");
  Vector v = Vector::Zero(shape.total());
  v(index) = 1.0;
  return StateVector(shape, std::move(v));
}

StateVector ket0() { return qubit_state(1, 0); }
StateVector ket1() { return qubit_state(0, 1); }
StateVector ket_plus() { return qubit_state(1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0)); }
StateVector ket_minus() { return qubit_state(1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0)); }

StateVector bell_phi_plus() {
  const double s = 1.0 / std::sqrt(2.0);
  return two_qubit_state(s, 0, 0, s);
}
StateVector bell_phi_minus() {
  const double s = 1.0 / std::sqrt(2.0);
  return two_qubit_state(s, 0, 0, -s);
}
StateVector bell_psi_plus() {
  const double s = 1.0 / std::sqrt(2.0);
  return two_qubit_state(0, s, s, 0);
}
StateVector bell_psi_minus() {
  const double s = 1.0 / std::sqrt(2.0);
  return two_qubit_state(0, s, -s, 0);
}

Operator projector_onto(const StateVector& psi) {
  return Operator(psi.shape(), psi.amps() * psi.amps().adjoint());
}

StateVector qubit_orthogonal(const StateVector& psi) {
  if (psi.dim() != 2) throw std::invalid_argument("qubit_orthogonal: not a qubit state");
  return qubit_state(-std::conj(psi.amp(1)), std::conj(psi.amp(0)));
}

double fidelity(const StateVector& a, const StateVector& b) {
  if (a.shape() != b.shape()) throw std::invalid_argument("fidelity: shape mismatch");
  return std::norm(a.amps().dot(b.amps()));
}

double fidelity(const DensityOperator& rho, const StateVector& psi) {
  if (rho.shape() != psi.shape()) throw std::invalid_argument("fidelity: shape mismatch");
  return (psi.amps().adjoint() * rho.mat() * psi.amps())(0).real();
}

Operator haar_random_unitary(int dim, RngStream& rng) {
  Matrix g(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) g(i, j) = Complex(rng.gaussian(), rng.gaussian());
  }
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  // Fix the phase ambiguity so the distribution is exactly Haar.
  for (int j = 0; j < dim; ++j) {
    Complex d = r(j, j);
    q.col(j) *= d / std::abs(d);
  }
  return Operator::unitary(Shape::single(dim), std::move(q));
}

}  // namespace qpm
