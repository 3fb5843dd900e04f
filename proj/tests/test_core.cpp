#include <cmath>
#include <numbers>

#include "doctest.h"
#include "qpm/core.hpp"
#include "test_util.hpp"

using namespace qpm;
using qpm::test::binomial_3sigma;
using qpm::test::max_abs_diff;

namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

StateVector qubit(Complex a0, Complex a1) {
  Vector v(2);
  v << a0, a1;
  return StateVector::normalized(Shape::qubits(1), std::move(v));
}

// Frozen closed form of the one-parameter gate used by the shift-group
// tests: exp[(i pi/2)(e^{-it} s+ + e^{it} s-)] = i [[0, e^{-it}], [e^{it}, 0]].
Matrix u_theta_closed_form(double theta) {
  Matrix u(2, 2);
  u << 0.0, Complex(0, 1) * std::exp(Complex(0, -theta)), Complex(0, 1) * std::exp(Complex(0, theta)), 0.0;
  return u;
}

}  // namespace

TEST_CASE("shape validation and indexing") {
  Shape s({2, 3, 2});
  CHECK(s.total() == 12);
  CHECK(s.strides() == std::vector<int>{6, 2, 1});
  CHECK(s.digit(7, 0) == 1);  // 7 = (1,0,1)
  CHECK(s.digit(7, 1) == 0);
  CHECK(s.digit(7, 2) == 1);
  CHECK_THROWS_AS(Shape({1, 2}), std::invalid_argument);
  CHECK(Shape().total() == 1);  // scalar space for trivial program registers
}

TEST_CASE("tensor of basis states and identities") {
  StateVector s = tensor(ket0(), ket1());
  CHECK(s.amp(0) == Complex(0));
  CHECK(s.amp(1) == Complex(1));
  CHECK(s.amp(2) == Complex(0));
  CHECK(s.amp(3) == Complex(0));

  Operator i4 = tensor(Operator::identity(Shape::qubits(1)), Operator::identity(Shape::qubits(1)));
  CHECK(max_abs_diff(i4.mat(), Matrix::Identity(4, 4)) == 0.0);
}

TEST_CASE("tensor against hand expansion of psi x (|00>+|11>)/sqrt2") {
  Complex a(0.6, 0.0), b(0.0, 0.8);
  StateVector psi = qubit(a, b);
  StateVector joint = tensor(psi, bell_phi_plus());
  Vector expected = Vector::Zero(8);
  expected(0) = a * kInvSqrt2;  // |000>
  expected(3) = a * kInvSqrt2;  // |011>
  expected(4) = b * kInvSqrt2;  // |100>
  expected(7) = b * kInvSqrt2;  // |111>
  CHECK(max_abs_diff(joint.amps(), expected) < 1e-15);
  CHECK(joint.shape() == Shape::qubits(3));
}

TEST_CASE("partial trace of maximally entangled state is I/2") {
  DensityOperator rho = DensityOperator::from_pure(bell_phi_plus());
  DensityOperator r = partial_trace(rho, {0});
  CHECK(max_abs_diff(r.mat(), Matrix::Identity(2, 2) / 2.0) < 1e-12);
}

TEST_CASE("partial trace of product state returns the kept factor") {
  RngStream rng(17);
  for (int i = 0; i < 20; ++i) {
    DensityOperator a = qpm::test::random_qubit_density(rng);
    DensityOperator b = qpm::test::random_qubit_density(rng);
    DensityOperator ab = tensor(a, b);
    CHECK(max_abs_diff(partial_trace(ab, {0}).mat(), a.mat()) < 1e-12);
    CHECK(max_abs_diff(partial_trace(ab, {1}).mat(), b.mat()) < 1e-12);
  }
}

TEST_CASE("partial trace of the symmetric information splitter output") {
  // Output port 1 of the splitting circuit at equal weights, built here by
  // hand from its two-branch expansion: (psi x B)/sqrt3 + (psi at slot 2,
  // B at slots 1,3)/sqrt3 with B = (|00>+|11>)/sqrt2.
  RngStream rng(3);
  for (int rep = 0; rep < 5; ++rep) {
    StateVector psi = haar_random_qubit(rng);
    Complex a = psi.amp(0), b = psi.amp(1);
    Vector out = Vector::Zero(8);
    const double c = 1.0 / std::sqrt(6.0);
    out(0) += 2 * c * a;  // |000>
    out(3) += c * a;      // |011>
    out(5) += c * a;      // |101>
    out(4) += c * b;      // |100>
    out(2) += c * b;      // |010>
    out(7) += 2 * c * b;  // |111>
    DensityOperator joint = DensityOperator::from_pure(StateVector(Shape::qubits(3), out));
    DensityOperator rho1 = partial_trace(joint, {0});
    CHECK(fidelity(rho1, psi) == doctest::Approx(5.0 / 6.0).epsilon(1e-12));
    CHECK(fidelity(rho1, qubit_orthogonal(psi)) == doctest::Approx(1.0 / 6.0).epsilon(1e-12));
  }
}

TEST_CASE("partial trace rejects bad keep sets") {
  DensityOperator rho = DensityOperator::from_pure(bell_phi_plus());
  CHECK_THROWS_AS(partial_trace(rho, {}), std::invalid_argument);
  CHECK_THROWS_AS(partial_trace(rho, {2}), std::invalid_argument);
  CHECK_THROWS_AS(partial_trace(rho, {0, 0}), std::invalid_argument);
}

TEST_CASE("apply places gates on the right subsystems") {
  StateVector s00 = tensor(ket0(), ket0());
  StateVector s = apply(pauli_x(), {1}, s00);
  CHECK(fidelity(s, tensor(ket0(), ket1())) == doctest::Approx(1.0));

  StateVector s10 = tensor(ket1(), ket0());
  CHECK(fidelity(apply(cnot(), {0, 1}, s10), tensor(ket1(), ket1())) == doctest::Approx(1.0));

  // Reversed target list swaps control and target.
  StateVector s01 = tensor(ket0(), ket1());
  CHECK(fidelity(apply(cnot(), {1, 0}, s01), tensor(ket1(), ket1())) == doctest::Approx(1.0));

  CHECK_THROWS_AS(apply(cnot(), {0}, s00), std::invalid_argument);
  CHECK_THROWS_AS(apply(pauli_x(), {2}, s00), std::invalid_argument);
  CHECK_THROWS_AS(apply(projector_onto(ket0()), {0}, s00), std::invalid_argument);
}

TEST_CASE("unitary apply preserves norm, trace, and positivity") {
  RngStream rng(23);
  Shape shape({2, 2, 3});
  for (int rep = 0; rep < 10; ++rep) {
    Operator u = haar_random_unitary(3, rng);
    Vector raw(shape.total());
    for (int i = 0; i < shape.total(); ++i) raw(i) = Complex(rng.gaussian(), rng.gaussian());
    StateVector s = StateVector::normalized(shape, raw);
    StateVector out = apply(u, {2}, s);
    CHECK(std::abs(out.amps().norm() - 1.0) < 1e-10);

    DensityOperator rho = DensityOperator::from_pure(s);
    DensityOperator rout = apply(u, {2}, rho);
    CHECK(std::abs(rout.mat().trace().real() - 1.0) < 1e-10);  // ctor re-checks PSD
  }
}

TEST_CASE("projective measurement basics") {
  auto r = measure_projective(ket0(), projector_onto(ket0()), {0});
  CHECK(r.probability == doctest::Approx(1.0));
  CHECK(fidelity(*r.post_state, ket0()) == doctest::Approx(1.0));

  auto r2 = measure_projective(ket_plus(), projector_onto(ket1()), {0});
  CHECK(r2.probability == doctest::Approx(0.5));
  CHECK(fidelity(*r2.post_state, ket1()) == doctest::Approx(1.0));

  auto r3 = measure_projective(ket0(), projector_onto(ket1()), {0});
  CHECK(r3.probability < 1e-12);
  CHECK(!r3.post_state.has_value());

  Matrix not_proj(2, 2);
  not_proj << 0.5, 0, 0, 0.7;
  CHECK_THROWS_AS(measure_projective(ket0(), Operator(Shape::qubits(1), not_proj), {0}),
                  std::invalid_argument);
}

TEST_CASE("projecting the phase-gate output onto |0> keeps the rotated branch") {
  // Hand-built two-qubit state (U(a)psi |0> + U(-a)psi |1>)/sqrt2.
  const double alpha = 0.7;
  Complex a(0.28, -0.54), b(0.31, 0.72);
  StateVector psi = qubit(a, b);
  Complex ep = std::exp(Complex(0, alpha)), em = std::exp(Complex(0, -alpha));
  Vector out(4);
  out << psi.amp(0) * ep * kInvSqrt2, psi.amp(0) * em * kInvSqrt2,  // data |0> branch
      psi.amp(1) * em * kInvSqrt2, psi.amp(1) * ep * kInvSqrt2;     // data |1> branch
  StateVector joint(Shape::qubits(2), out);

  auto r = measure_projective(joint, projector_onto(ket0()), {1});
  CHECK(r.probability == doctest::Approx(0.5).epsilon(1e-12));
  StateVector target = tensor(qubit(ep * psi.amp(0), em * psi.amp(1)), ket0());
  CHECK(fidelity(*r.post_state, target) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("complete projector sets have unit total probability") {
  RngStream rng(5);
  Shape shape = Shape::qubits(2);
  for (int rep = 0; rep < 10; ++rep) {
    Vector raw(4);
    for (int i = 0; i < 4; ++i) raw(i) = Complex(rng.gaussian(), rng.gaussian());
    StateVector s = StateVector::normalized(shape, raw);
    double total = 0.0;
    for (int b = 0; b < 2; ++b) {
      total += measure_projective(s, projector_onto(basis_state(Shape::qubits(1), b)), {1}).probability;
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("povm probabilities: computational basis and unambiguous pair") {
  Shape q = Shape::qubits(1);
  Povm comp(q, {projector_onto(ket0()).mat(), projector_onto(ket1()).mat()}, {"0", "1"});
  auto probs = povm_probabilities(ket0(), comp);
  CHECK(probs[0] == doctest::Approx(1.0));
  CHECK(probs[1] == doctest::Approx(0.0));

  // Orthogonal pair: flag elements are full projectors, failure element is 0.
  Povm usd_orth(q,
                {projector_onto(ket0()).mat(), projector_onto(ket1()).mat(), Matrix::Zero(2, 2)},
                {"identify-1", "identify-2", "fail"});
  auto p1 = povm_probabilities(ket0(), usd_orth);
  CHECK(p1[0] == doctest::Approx(1.0));
  CHECK(p1[2] == doctest::Approx(0.0));

  // Overlap 1/2 pair: scaling 2/3 on the orthogonal-complement projectors.
  StateVector psi1 = ket0();
  StateVector psi2 = qubit(0.5, std::sqrt(3.0) / 2.0);
  double q23 = 2.0 / 3.0;
  Matrix pi1 = q23 * projector_onto(qubit_orthogonal(psi2)).mat();
  Matrix pi2 = q23 * projector_onto(qubit_orthogonal(psi1)).mat();
  Matrix fail = Matrix::Identity(2, 2) - pi1 - pi2;
  Povm usd_half(q, {pi1, pi2, fail}, {"identify-1", "identify-2", "fail"});
  auto pa = povm_probabilities(psi1, usd_half);
  auto pb = povm_probabilities(psi2, usd_half);
  CHECK(0.5 * (pa[2] + pb[2]) == doctest::Approx(0.5).epsilon(1e-10));  // average failure
  CHECK(pa[1] == doctest::Approx(0.0).epsilon(1e-12));                  // never misidentifies
  CHECK(pb[0] == doctest::Approx(0.0).epsilon(1e-12));

  DensityOperator rho0 = DensityOperator::from_pure(ket0());
  auto pr = povm_probabilities(rho0, comp);
  CHECK(pr[0] == doctest::Approx(1.0));
}

TEST_CASE("sample_outcome is faithful and seed-deterministic") {
  RngStream rng(42);
  for (int i = 0; i < 100; ++i) CHECK(sample_outcome({1.0, 0.0}, rng) == 0);

  const long long trials = 100000;
  auto frequency = [&](std::vector<double> probs, int idx, std::uint64_t seed) {
    RngStream r(seed);
    long long hits = 0;
    for (long long t = 0; t < trials; ++t) hits += sample_outcome(probs, r) == idx ? 1 : 0;
    return static_cast<double>(hits) / static_cast<double>(trials);
  };
  CHECK(std::abs(frequency({0.5, 0.5}, 0, 7) - 0.5) < binomial_3sigma(0.5, trials));
  CHECK(std::abs(frequency({1.0 / 3.0, 2.0 / 3.0}, 1, 8) - 2.0 / 3.0) <
        binomial_3sigma(2.0 / 3.0, trials));

  CHECK_THROWS_AS(sample_outcome({-0.2, 1.2}, rng), std::invalid_argument);
  CHECK_THROWS_AS(sample_outcome({0.4, 0.4}, rng), std::invalid_argument);

  RngStream a(99), b(99);
  for (int i = 0; i < 50; ++i) CHECK(a.uniform() == b.uniform());
  RngStream f1 = a.fork(3), f2 = b.fork(3);
  for (int i = 0; i < 50; ++i) CHECK(f1.uniform() == f2.uniform());
}

TEST_CASE("haar qubits are normalized and uniformly spread") {
  RngStream rng(2024);
  const int n = 20000;
  double sum_overlap_sq = 0.0;
  double sum_z = 0.0;
  for (int i = 0; i < n; ++i) {
    StateVector p1 = haar_random_qubit(rng);
    StateVector p2 = haar_random_qubit(rng);
    CHECK(std::abs(p1.amps().norm() - 1.0) < 1e-12);
    sum_overlap_sq += fidelity(p1, p2);
    sum_z += (p1.amps().adjoint() * pauli_z().mat() * p1.amps())(0).real();
  }
  // |<p1|p2>|^2 is uniform on [0,1] for Haar pairs; <z> is uniform on [-1,1].
  CHECK(std::abs(sum_overlap_sq / n - 0.5) < 3.0 * std::sqrt(1.0 / 12.0 / n));
  CHECK(std::abs(sum_z / n) < 3.0 * std::sqrt(1.0 / 3.0 / n));
}

TEST_CASE("herm_exp spectral exponential") {
  Operator x = pauli_x();
  CHECK(max_abs_diff(herm_exp(x, Complex(0, 0)).mat(), Matrix::Identity(2, 2)) < 1e-12);

  Matrix ix = Complex(0, 1) * x.mat();
  CHECK(max_abs_diff(herm_exp(x, Complex(0, std::numbers::pi / 2)).mat(), ix) < 1e-12);

  Matrix not_herm(2, 2);
  not_herm << 0, 1, 0, 0;
  CHECK_THROWS_AS(herm_exp(Operator(Shape::qubits(1), not_herm), Complex(0, 1)), std::invalid_argument);
}

TEST_CASE("herm_exp reproduces the two-program shift operator") {
  // N = 2: generator s+ x E- + s- x E+ with E+ = E- = X; the exponential must
  // send psi x |t_m> to U(t_m) psi x |t_m> for both grid angles {0, pi}.
  Matrix gen = Matrix::Zero(4, 4);
  gen(2 * 1 + 1, 2 * 0 + 0) = 1.0;  // |0,j> -> |1,j+1>
  gen(2 * 1 + 0, 2 * 0 + 1) = 1.0;
  gen(2 * 0 + 1, 2 * 1 + 0) = 1.0;  // |1,j> -> |0,j-1>
  gen(2 * 0 + 0, 2 * 1 + 1) = 1.0;
  Operator g = herm_exp(Operator(Shape({2, 2}), gen), Complex(0, std::numbers::pi / 2));

  RngStream rng(31);
  for (int m = 0; m < 2; ++m) {
    double theta = std::numbers::pi * m;
    Vector prog(2);
    prog << kInvSqrt2, kInvSqrt2 * std::exp(Complex(0, -theta));
    StateVector program(Shape::qubits(1), prog);
    for (int rep = 0; rep < 5; ++rep) {
      StateVector psi = haar_random_qubit(rng);
      StateVector out = apply(g, {0, 1}, tensor(psi, program));
      Vector rotated = u_theta_closed_form(theta) * psi.amps();
      StateVector target = tensor(StateVector(Shape::qubits(1), rotated), program);
      CHECK(fidelity(out, target) == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("herm_exp with imaginary scale is unitary") {
  RngStream rng(8);
  for (int rep = 0; rep < 10; ++rep) {
    Matrix m(3, 3);
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) m(i, j) = Complex(rng.gaussian(), rng.gaussian());
    }
    Matrix h = (m + m.adjoint()) / 2.0;
    Operator u = herm_exp(Operator(Shape::single(3), h), Complex(0, rng.uniform() * 4 - 2));
    CHECK(max_abs_diff(u.mat() * u.mat().adjoint(), Matrix::Identity(3, 3)) < 1e-9);
  }
}

TEST_CASE("povm construction rejects invalid element sets") {
  Shape q = Shape::qubits(1);
  CHECK_THROWS_AS(Povm(q, {projector_onto(ket0()).mat()}, {"only"}), std::invalid_argument);
  Matrix neg = -0.1 * Matrix::Identity(2, 2);
  Matrix rest = 1.1 * Matrix::Identity(2, 2);
  CHECK_THROWS_AS(Povm(q, {neg, rest}, {"a", "b"}), std::invalid_argument);
}
