#include <cmath>

#include "doctest.h"
#include "qpm/progdisc.hpp"
#include "test_util.hpp"

using namespace qpm;
using namespace qpm::progdisc;
using qpm::test::binomial_3sigma;
using qpm::test::max_abs_diff;

TEST_CASE("antisymmetric pair projectors") {
  Operator pac = antisym_projector(Register::a, Register::c);
  CHECK(max_abs_diff(pac.mat() * pac.mat(), pac.mat()) < 1e-12);
  CHECK(max_abs_diff(pac.mat().adjoint(), pac.mat()) < 1e-12);
  CHECK(std::abs(pac.mat().trace().real() - 2.0) < 1e-12);  // singlet (x) identity

  RngStream rng(71);
  for (int rep = 0; rep < 30; ++rep) {
    StateVector psi1 = haar_random_qubit(rng);
    StateVector psi2 = haar_random_qubit(rng);
    StateVector joint = joint_state(psi1, psi2, 1);  // psi1 at a and c: symmetric pair
    CHECK((pac.mat() * joint.amps()).norm() < 1e-12);

    double s2 = fidelity(psi1, psi2);
    Operator pbc = antisym_projector(Register::b, Register::c);
    double overlap = (joint.amps().adjoint() * pbc.mat() * joint.amps())(0).real();
    CHECK(overlap == doctest::Approx((1.0 - s2) / 2.0).epsilon(1e-10));
  }

  CHECK_THROWS_AS(antisym_projector(Register::a, Register::a), std::invalid_argument);
}

TEST_CASE("measurement scaling and unambiguity") {
  CHECK(discriminator_scale() == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  Povm povm = discriminator_povm();  // construction checks PSD + completeness

  RngStream rng(72);
  for (int rep = 0; rep < 30; ++rep) {
    StateVector psi1 = haar_random_qubit(rng);
    StateVector psi2 = haar_random_qubit(rng);
    auto p1 = povm_probabilities(joint_state(psi1, psi2, 1), povm);
    auto p2 = povm_probabilities(joint_state(psi1, psi2, 2), povm);
    CHECK(p1[1] < 1e-12);  // never claims 2 on a 1-instance
    CHECK(p2[0] < 1e-12);
    double s2 = fidelity(psi1, psi2);
    CHECK(p1[0] == doctest::Approx((1.0 - s2) / 3.0).epsilon(1e-9));
    CHECK(p2[1] == doctest::Approx((1.0 - s2) / 3.0).epsilon(1e-9));

    // Swapping the program registers and relabeling outcomes changes nothing.
    auto swapped = povm_probabilities(joint_state(psi2, psi1, 2), povm);
    CHECK(swapped[1] == doctest::Approx(p1[0]).epsilon(1e-10));
    CHECK(swapped[0] == doctest::Approx(p1[1]).epsilon(1e-10));
    CHECK(swapped[2] == doctest::Approx(p1[2]).epsilon(1e-10));
  }
}

TEST_CASE("per-instance success probability") {
  RngStream rng(73);
  for (int rep = 0; rep < 100; ++rep) {
    StateVector psi1 = haar_random_qubit(rng);
    StateVector psi2 = haar_random_qubit(rng);
    double expected = (1.0 - fidelity(psi1, psi2)) / 3.0;
    CHECK(std::abs(instance_success_probability(psi1, psi2) - expected) < 1e-9);
  }
  CHECK(instance_success_probability(ket0(), ket1()) == doctest::Approx(1.0 / 3.0).epsilon(1e-10));
  CHECK(instance_success_probability(ket_plus(), ket_plus()) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("instances assemble the three-qubit input") {
  RngStream rng(75);
  StateVector psi1 = haar_random_qubit(rng);
  StateVector psi2 = haar_random_qubit(rng);
  DiscriminatorInstance one = make_instance(psi1, psi2, 1);
  CHECK(qpm::test::max_abs_diff(one.joint.amps(), tensor(tensor(psi1, psi2), psi1).amps()) < 1e-12);
  DiscriminatorInstance two = make_instance(psi1, psi2, 2);
  CHECK(qpm::test::max_abs_diff(two.joint.amps(), tensor(tensor(psi1, psi2), psi2).amps()) < 1e-12);
  CHECK_THROWS_AS(make_instance(psi1, psi2, 3), std::invalid_argument);
}

TEST_CASE("Monte Carlo average approaches 1/6 with no misidentifications") {
  RngStream rng(74);
  const long long trials = 200000;
  MonteCarloStats stats = run_monte_carlo(trials, rng);
  CHECK(stats.misidentifications == 0);
  CHECK(std::abs(stats.success_rate() - 1.0 / 6.0) < binomial_3sigma(1.0 / 6.0, trials));
  CHECK(stats.successes + stats.failures == trials);

  CHECK_THROWS_AS(average_success(100, rng), std::invalid_argument);
}
