#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "signjump/su2_chain.hpp"

using namespace signjump;

namespace {

DriveProfile gaussian(double omega0, double delta0) {
  return DriveProfile(PulseShape(ShapeKind::Gaussian, 1.0), omega0, DetuningProfile(delta0));
}

CayleyKlein random_pair(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0), phase(-M_PI, M_PI);
  const double r = std::sqrt(unit(rng));
  return {std::polar(r, phase(rng)), std::polar(std::sqrt(1.0 - r * r), phase(rng))};
}

}  // namespace

TEST_CASE("three-level Hamiltonian") {
  const Matrix3c h0 = hamiltonian_3(gaussian(0.0, 2.0), -1.0);
  CHECK(h0.isApprox(Eigen::Vector3cd(-2.0, 0.0, 2.0).asDiagonal().toDenseMatrix()));

  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> param(0.01, 10.0), time(-3.0, 3.0);
  for (int i = 0; i < 200; ++i) {
    const DriveProfile drive = gaussian(param(rng), param(rng));
    const double t = time(rng);
    const Matrix3c h = hamiltonian_3(drive, t);
    CHECK(std::abs(h.trace()) == 0.0);
    // Brute-force eigensolve: spin-1 ladder {-eps, 0, +eps}.
    const Eigen::Vector3d ev = Eigen::SelfAdjointEigenSolver<Matrix3c>(h).eigenvalues();
    const double eps = std::hypot(drive.rabi(t), drive.detuning_at(t));
    CHECK(ev(0) == doctest::Approx(-eps).epsilon(1e-12));
    CHECK(std::abs(ev(1)) < 1e-12 * std::max(1.0, eps));
    CHECK(ev(2) == doctest::Approx(eps).epsilon(1e-12));
  }
}

TEST_CASE("Majorana lift of special pairs") {
  CHECK(majorana_u3({1.0, 0.0}).isApprox(Matrix3c::Identity()));

  // U2 = [[0, 1], [-1, 0]] lifts to the anti-diagonal flip with a sign on |2>.
  const Matrix3c flip = majorana_u3({0.0, 1.0});
  Matrix3c expected;
  expected << 0, 0, 1, 0, -1, 0, 1, 0, 0;
  CHECK((flip - expected).cwiseAbs().maxCoeff() == 0.0);

  CHECK_THROWS_AS(majorana_u3({1.0, 1.0}), std::invalid_argument);
}

TEST_CASE("Majorana lift is unitary with the expected element structure") {
  std::mt19937_64 rng(23);
  for (int i = 0; i < 1000; ++i) {
    const CayleyKlein ck = random_pair(rng);
    const Matrix3c u = majorana_u3(ck);
    REQUIRE(unitarity_defect(u) < 1e-12);
    CHECK(std::abs(u(1, 1).imag()) <= 1e-12);
    CHECK(std::abs(u(1, 1).real() - (std::norm(ck.a) - std::norm(ck.b))) < 1e-12);
    CHECK(std::abs(u(0, 2) - ck.b * ck.b) < 1e-15);
    CHECK(std::abs(u(2, 0) - std::conj(ck.b) * std::conj(ck.b)) < 1e-15);
    CHECK(transition_table(u).stochasticity_defect() < 1e-12);
  }
}

TEST_CASE("lifted numeric two-level propagator equals the numeric three-level one") {
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> param(0.5, 10.0);
  for (int i = 0; i < 10; ++i) {
    const DriveProfile drive = gaussian(param(rng), param(rng));
    CHECK(majorana_residual(drive, default_integration_spec(drive)) <= 1e-6);
  }
  // Smoothed jump and a different envelope: the identity does not rely on adiabaticity.
  const DriveProfile smooth(PulseShape(ShapeKind::Lorentzian, 1.0), 0.7, DetuningProfile(0.3, 0.5));
  CHECK(majorana_residual(smooth, default_integration_spec(smooth)) <= 1e-6);
}

TEST_CASE("analytic transition table") {
  const TransitionTable equal = analytic_transition_table(2.0, 2.0);
  CHECK(equal(1, 1) == doctest::Approx(0.25));
  CHECK(equal(1, 2) == doctest::Approx(0.5));
  CHECK(equal(1, 3) == doctest::Approx(0.25));
  CHECK(equal(2, 1) == doctest::Approx(0.5));
  CHECK(equal(2, 2) == doctest::Approx(0.0));
  CHECK(equal(2, 3) == doctest::Approx(0.5));

  const TransitionTable strong = analytic_transition_table(10.0, 1.0);
  CHECK(strong(1, 3) == doctest::Approx(std::pow(100.0 / 101.0, 2)).epsilon(1e-14));
  CHECK(strong(1, 3) == doctest::Approx(0.98030).epsilon(1e-5));
  CHECK(strong(1, 2) == doctest::Approx(0.01960).epsilon(1e-3));
  CHECK(strong(1, 1) == doctest::Approx(0.00010).epsilon(1e-2));

  CHECK_THROWS_AS(analytic_transition_table(1.0, 0.0), std::domain_error);

  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> param(1e-3, 10.0), phase(-20.0, 20.0);
  for (int i = 0; i < 500; ++i) {
    const double omega0 = param(rng), delta0 = param(rng);
    const TransitionTable table = analytic_transition_table(omega0, delta0);
    CHECK(table.stochasticity_defect() <= 1e-12);
    CHECK(table.probabilities.row(2).isApprox(table.probabilities.row(0).reverse(), 1e-15));
    CHECK(table(1, 2) == doctest::Approx(table(2, 1)).epsilon(1e-15));
    CHECK(table(2, 3) == doctest::Approx(table(3, 2)).epsilon(1e-15));

    const JumpAngles angles = jump_angles(mixing_angle(omega0, delta0), mixing_angle(omega0, -delta0));
    const TransitionTable lifted = transition_table(majorana_u3(cayley_klein({phase(rng), phase(rng)}, angles)));
    CHECK((lifted.probabilities - table.probabilities).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("middle state is protected at strong coupling") {
  for (double ratio = 10.0; ratio <= 1000.0; ratio *= 1.3) {
    const double delta0 = 1.0, omega0 = ratio * delta0;
    const double exact = analytic_transition_table(omega0, delta0)(2, 2);
    CHECK(exact >= 1.0 - 4.0 * std::pow(delta0 / omega0, 2) - 1e-9);
    CHECK(strong_coupling_table(omega0, delta0)(2, 2) == doctest::Approx(exact).epsilon(1e-3));
  }
}

TEST_CASE("three-level simulation") {
  const DriveProfile none = gaussian(0.0, 3.0);
  for (int k = 1; k <= 3; ++k) {
    const auto out = simulate_three_level(none, default_integration_spec(none), k);
    CHECK(out.populations(k - 1) == doctest::Approx(1.0).epsilon(1e-9));
  }

  const DriveProfile balanced = gaussian(5.0, 5.0);
  const auto middle = simulate_three_level(balanced, default_integration_spec(balanced), 2);
  CHECK(middle.populations(1) <= 0.02);
  CHECK(middle.populations.sum() == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(unitarity_defect(middle.propagator) <= 1e-9);

  // Numeric P(1 -> 3) is |b|^4 of the numeric two-level propagator; the
  // frozen two-level oracle value at (8, 2) is 0.9979235306.
  const DriveProfile drive = gaussian(8.0, 2.0);
  const auto first = simulate_three_level(drive, default_integration_spec(drive), 1);
  CHECK(first.populations(2) == doctest::Approx(std::pow(0.9979235306, 2)).epsilon(1e-7));

  CHECK_THROWS_AS(simulate_three_level(drive, default_integration_spec(drive), 4), std::out_of_range);
}
