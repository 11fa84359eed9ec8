#include "signjump/stepwise.hpp"

#include <cmath>
#include <stdexcept>

namespace signjump {

namespace {

constexpr std::complex<double> kI(0.0, 1.0);

}  // namespace

Matrix2c CayleyKlein::matrix() const {
  Matrix2c u;
  u << a, b, -std::conj(b), std::conj(a);
  return u;
}

PhasePair accumulate_phases(const DriveProfile& drive, double t_start, double t_end, double tolerance) {
  if (!(t_start < 0.0 && 0.0 < t_end)) throw std::invalid_argument("phase window must contain t = 0");
  auto epsilon = [&drive](double t) { return std::hypot(drive.rabi(t), drive.detuning_at(t)); };
  // Gauss-Kronrod nodes are interior, so the step at t = 0 is never sampled.
  PhasePair p;
  p.delta_minus = 0.5 * quadrature(epsilon, t_start, 0.0, tolerance);
  p.delta_plus = 0.5 * quadrature(epsilon, 0.0, t_end, tolerance);
  return p;
}

JumpAngles jump_angles(double theta_minus, double theta_plus) {
  return {theta_minus, theta_plus, theta_minus - theta_plus};
}

JumpAngles jump_angles(const DriveProfile& drive) {
  if (!drive.detuning.is_step()) throw std::invalid_argument("jump angles need an ideal detuning step");
  const double omega0 = drive.peak_rabi * drive.shape.evaluate(0.0);
  const double delta0 = drive.detuning.magnitude;
  return jump_angles(mixing_angle(omega0, delta0), mixing_angle(omega0, -delta0));
}

Matrix2c piecewise_propagator_adiabatic(const PhasePair& phases, const JumpAngles& angles) {
  Matrix2c before = Matrix2c::Zero();
  before.diagonal() << std::exp(kI * phases.delta_minus), std::exp(-kI * phases.delta_minus);
  Matrix2c after = Matrix2c::Zero();
  after.diagonal() << std::exp(kI * phases.delta_plus), std::exp(-kI * phases.delta_plus);
  const Matrix2c kick = rotation_matrix(angles.delta_theta).cast<std::complex<double>>();
  return after * kick * before;
}

Matrix2c diabatic_propagator(const PhasePair& phases, const JumpAngles& angles) {
  const Matrix2c r_final = rotation_matrix(M_PI / 2).cast<std::complex<double>>();
  const Matrix2c r_initial = rotation_matrix(0.0).cast<std::complex<double>>();
  return r_final * piecewise_propagator_adiabatic(phases, angles) * r_initial.transpose();
}

CayleyKlein cayley_klein(const PhasePair& phases, const JumpAngles& angles) {
  const double s = std::sin(angles.delta_theta);
  const double c = std::cos(angles.delta_theta);
  return {-std::exp(kI * (phases.delta_minus - phases.delta_plus)) * s,
          -std::exp(-kI * (phases.delta_minus + phases.delta_plus)) * c};
}

CayleyKlein extract_cayley_klein(const Matrix2c& u) {
  const std::complex<double> root = std::sqrt(u.determinant());
  if (std::abs(root) == 0.0) throw std::domain_error("singular propagator");
  return {u(0, 0) / root, u(0, 1) / root};
}

double analytic_p2(double omega0, double delta0) {
  if (!(delta0 > 0.0)) throw std::domain_error("analytic_p2 requires Delta0 > 0");
  if (!(omega0 >= 0.0)) throw std::domain_error("analytic_p2 requires Omega0 >= 0");
  const JumpAngles angles = jump_angles(mixing_angle(omega0, delta0), mixing_angle(omega0, -delta0));
  const double c = std::cos(angles.delta_theta);
  const double from_angle = c * c;
  const double from_ratio = omega0 * omega0 / (omega0 * omega0 + delta0 * delta0);
  if (std::abs(from_angle - from_ratio) > 1e-12)
    throw std::logic_error("mixing-angle and ratio forms of P2 disagree");
  return from_ratio;
}

}  // namespace signjump
