#include <cmath>
#include <numbers>

#include "doctest.h"
#include "qpm/phasegate.hpp"
#include "test_util.hpp"

using namespace qpm;
using namespace qpm::phase;
using qpm::test::binomial_3sigma;
using qpm::test::max_abs_diff;
using qpm::test::phase_free_diff;

namespace {

Vector rotated(const StateVector& psi, double alpha) {
  Vector v(2);
  v << std::exp(Complex(0, alpha)) * psi.amp(0), std::exp(Complex(0, -alpha)) * psi.amp(1);
  return v;
}

}  // namespace

TEST_CASE("program states") {
  CHECK(fidelity(xi_program(0.0), ket_plus()) == doctest::Approx(1.0).epsilon(1e-12));
  RngStream rng(61);
  for (int rep = 0; rep < 20; ++rep) {
    double alpha = rng.uniform() * 2 * std::numbers::pi;
    CHECK(std::abs(xi_program(alpha).amps().norm() - 1.0) < 1e-12);
    // Programs a quarter period apart are orthogonal.
    CHECK(std::abs(xi_program(alpha).amps().dot(xi_program(alpha + std::numbers::pi / 2).amps())) < 1e-12);
  }
}

TEST_CASE("one-parameter group law") {
  RngStream rng(62);
  for (int rep = 0; rep < 20; ++rep) {
    double a = rng.uniform() * 2 * std::numbers::pi;
    double b = rng.uniform() * 2 * std::numbers::pi;
    CHECK(max_abs_diff(u_alpha(a).mat() * u_alpha(b).mat(), u_alpha(a + b).mat()) < 1e-12);
  }
  CHECK(max_abs_diff(u_alpha(0.0).mat(), Matrix::Identity(2, 2)) < 1e-12);
}

TEST_CASE("single-shot pre-measurement state matches the two-branch expansion") {
  RngStream rng(63);
  for (int rep = 0; rep < 100; ++rep) {
    StateVector psi = haar_random_qubit(rng);
    double alpha = rng.uniform() * 2 * std::numbers::pi;
    StateVector out = single_shot_premeasurement(psi, alpha);
    Vector expected = Vector::Zero(4);
    Vector plus = rotated(psi, alpha), minus = rotated(psi, -alpha);
    for (int d = 0; d < 2; ++d) {
      expected(2 * d + 0) = plus(d) / std::sqrt(2.0);
      expected(2 * d + 1) = minus(d) / std::sqrt(2.0);
    }
    CHECK(phase_free_diff(out.amps(), expected) < 1e-10);
  }
}

TEST_CASE("single shot succeeds half the time and is exact on success") {
  RngStream rng(64);
  const double alpha = 0.9;
  StateVector psi = haar_random_qubit(rng);
  const long long trials = 100000;
  long long hits = 0;
  for (long long t = 0; t < trials; ++t) {
    PhaseRunRecord r = single_shot(psi, alpha, rng);
    if (r.success) {
      ++hits;
      CHECK(r.rounds_used == 1);
    }
  }
  double rate = static_cast<double>(hits) / static_cast<double>(trials);
  CHECK(std::abs(rate - 0.5) < binomial_3sigma(0.5, trials));

  for (int rep = 0; rep < 50; ++rep) {
    StateVector in = haar_random_qubit(rng);
    double a = rng.uniform() * 2 * std::numbers::pi;
    PhaseRunRecord r = single_shot(in, a, rng);
    Vector target = rotated(in, r.success ? a : -a);
    CHECK(fidelity(r.final_state, StateVector(Shape::qubits(1), target)) > 1.0 - 1e-9);
  }

  // At alpha = 0 both branches leave the input unchanged.
  PhaseRunRecord r0 = single_shot(psi, 0.0, rng);
  CHECK(fidelity(r0.final_state, psi) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("repeat-until-success compounds to 1 - 2^-k") {
  RngStream rng(65);
  const double alpha = 1.1;
  StateVector psi = haar_random_qubit(rng);

  const long long trials = 100000;
  long long two_round_hits = 0;
  for (long long t = 0; t < trials; ++t) {
    if (repeat_until_success(psi, alpha, 2, rng).success) ++two_round_hits;
  }
  double rate2 = static_cast<double>(two_round_hits) / static_cast<double>(trials);
  CHECK(std::abs(rate2 - 0.75) < binomial_3sigma(0.75, trials));

  const long long long_trials = 20000;
  long long ten_round_hits = 0;
  for (long long t = 0; t < long_trials; ++t) {
    if (repeat_until_success(psi, alpha, 10, rng).success) ++ten_round_hits;
  }
  double rate10 = static_cast<double>(ten_round_hits) / static_cast<double>(long_trials);
  CHECK(rate10 >= 1.0 - std::pow(2.0, -10) - binomial_3sigma(1.0 - std::pow(2.0, -10), long_trials));

  // Every success, at any round, yields exactly U(alpha)|psi>; every overall
  // failure leaves U(-(2^k - 1) alpha)|psi>.
  for (int rep = 0; rep < 300; ++rep) {
    StateVector in = haar_random_qubit(rng);
    double a = rng.uniform() * 2 * std::numbers::pi;
    PhaseRunRecord r = repeat_until_success(in, a, 3, rng);
    if (r.success) {
      CHECK(fidelity(r.final_state, StateVector(Shape::qubits(1), rotated(in, a))) > 1.0 - 1e-9);
    } else {
      double residual = -(std::pow(2.0, r.rounds_used) - 1.0) * a;
      CHECK(fidelity(r.final_state, StateVector(Shape::qubits(1), rotated(in, residual))) > 1.0 - 1e-9);
    }
  }
  CHECK_THROWS_AS(repeat_until_success(psi, alpha, 0, rng), std::invalid_argument);
}

TEST_CASE("two-program processor pre-measurement branches") {
  RngStream rng(66);
  for (int rep = 0; rep < 100; ++rep) {
    StateVector psi = haar_random_qubit(rng);
    double a = rng.uniform() * 2 * std::numbers::pi;
    StateVector out = toffoli_premeasurement(psi, a);

    // Branch phases from expanding the two programs through CNOT + Toffoli.
    Vector expected = Vector::Zero(8);
    Vector acc = rotated(psi, a), rej = rotated(psi, -3.0 * a);
    const Complex phases[3] = {std::exp(Complex(0, 2 * a)), std::exp(Complex(0, -2 * a)), 1.0};
    for (int d = 0; d < 2; ++d) {
      for (int m = 0; m < 3; ++m) expected(4 * d + m) = 0.5 * phases[m] * acc(d);
      expected(4 * d + 3) = 0.5 * rej(d);
    }
    CHECK(phase_free_diff(out.amps(), expected) < 1e-10);

    // Each accepted branch equals U(alpha)|psi> up to a phase; the rejected
    // branch equals U^{-1}(3 alpha)|psi>.
    for (int m = 0; m < 4; ++m) {
      Vector branch(2);
      branch << out.amp(m), out.amp(4 + m);
      branch *= 2.0;  // each branch carries weight 1/4
      CHECK(std::abs(branch.norm() - 1.0) < 1e-10);
      Vector target = m < 3 ? acc : rej;
      CHECK(std::norm(branch.dot(target)) > 1.0 - 1e-10);
    }
  }
}

TEST_CASE("the two-program machine as a processor with a rank-3 accept projector") {
  RngStream rng(68);
  proc::Processor p = toffoli_processor();
  Matrix accept3 = Matrix::Identity(4, 4);
  accept3(3, 3) = 0.0;  // accept program outcomes {00, 01, 10}
  for (int rep = 0; rep < 10; ++rep) {
    StateVector psi = haar_random_qubit(rng);
    double a = rng.uniform() * 2 * std::numbers::pi;
    StateVector program = tensor(xi_program(a), xi_program(2 * a));
    auto out = proc::probabilistic_execute(p, program, Operator(Shape::qubits(2), accept3), psi);
    CHECK(out.probability == doctest::Approx(0.75).epsilon(1e-12));
    // The accepted branch factorizes: all three kept outcomes carry the same
    // rotated data state.
    REQUIRE(out.data_state.has_value());
    CHECK(fidelity(*out.data_state, StateVector(Shape::qubits(1), rotated(psi, a))) >
          1.0 - 1e-10);
  }
}

TEST_CASE("two-program processor accepts at rate 3/4 and is exact") {
  RngStream rng(67);
  StateVector psi = haar_random_qubit(rng);
  const double alpha = 0.37;
  const long long trials = 100000;
  long long hits = 0;
  for (long long t = 0; t < trials; ++t) {
    if (toffoli_processor_run(psi, alpha, rng).success) ++hits;
  }
  double rate = static_cast<double>(hits) / static_cast<double>(trials);
  CHECK(std::abs(rate - 0.75) < binomial_3sigma(0.75, trials));

  for (int rep = 0; rep < 50; ++rep) {
    StateVector in = haar_random_qubit(rng);
    double a = rng.uniform() * 2 * std::numbers::pi;
    PhaseRunRecord r = toffoli_processor_run(in, a, rng);
    Vector target = rotated(in, r.success ? a : -3.0 * a);
    CHECK(fidelity(r.final_state, StateVector(Shape::qubits(1), target)) > 1.0 - 1e-9);
    CHECK(r.per_round_outcomes.size() == 1);
    CHECK((r.per_round_outcomes[0] == 3) == !r.success);
  }
}
