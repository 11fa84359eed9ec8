#include "signjump/two_level.hpp"

#include <cmath>
#include <stdexcept>

namespace signjump {

Matrix2c hamiltonian_2(const DriveProfile& drive, double t) {
  const double omega = drive.rabi(t);
  const double delta = drive.detuning_at(t);
  Matrix2c h;
  h << -0.5 * delta, 0.5 * omega, 0.5 * omega, 0.5 * delta;
  return h;
}

double mixing_angle(double omega, double delta) {
  if (omega == 0.0 && delta == 0.0) throw std::domain_error("mixing angle undefined at Omega = Delta = 0");
  return 0.5 * std::atan2(omega, delta);
}

AdiabaticSnapshot adiabatic_snapshot(const DriveProfile& drive, double t) {
  if (t == 0.0 && drive.detuning.is_step())
    throw std::domain_error("derivative undefined at jump (t = 0 with an ideal step)");
  const double omega = drive.rabi(t);
  const double delta = drive.detuning_at(t);
  const double omega_dot = drive.rabi_derivative(t);
  const double delta_dot = drive.detuning.derivative(t);

  AdiabaticSnapshot s;
  s.t = t;
  const double eps2 = omega * omega + delta * delta;
  s.epsilon = std::sqrt(eps2);
  s.theta = mixing_angle(omega, delta);
  s.theta_dot = 0.5 * (delta * omega_dot - omega * delta_dot) / eps2;
  s.adiabaticity_ratio = std::abs(s.theta_dot) / s.epsilon;
  return s;
}

Eigen::Matrix2d rotation_matrix(double theta) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  Eigen::Matrix2d r;
  r << c, -s, s, c;
  return r;
}

IntegrationSpec<double> default_integration_spec(const DriveProfile& drive) {
  IntegrationSpec<double> spec;
  spec.t_start = -20.0 * drive.shape.width;
  spec.t_end = 20.0 * drive.shape.width;
  spec.step = 1e-2 * drive.shape.width;
  return spec;
}

TwoLevelOutcome simulate_final_populations(const DriveProfile& drive, const IntegrationSpec<double>& spec,
                                           const StateVector2& initial) {
  if (std::abs(initial.squaredNorm() - 1.0) > 1e-9) throw std::invalid_argument("initial state is not normalized");
  TwoLevelOutcome out;
  out.propagator = build_propagator<double, 2>([&drive](double t) { return hamiltonian_2(drive, t); }, spec);
  out.final_state = out.propagator * initial;
  out.p1 = std::norm(out.final_state(0));
  out.p2 = std::norm(out.final_state(1));
  return out;
}

}  // namespace signjump
