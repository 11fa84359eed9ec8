#pragma once

// Driven two-level system H(t) = (1/2) [[-Delta, Omega], [Omega, Delta]] and
// its adiabatic-frame diagnostics.

#include <Eigen/Dense>

#include "signjump/integrator.hpp"
#include "signjump/pulse.hpp"

namespace signjump {

using StateVector2 = CVector<double, 2>;
using StateVector3 = CVector<double, 3>;
using Matrix2c = CMatrix<double, 2>;
using Matrix3c = CMatrix<double, 3>;

/// Diabatic basis vector |index>, index counted from 1.
template <int N>
CVector<double, N> basis_state(int index) {
  if (index < 1 || index > N) throw std::out_of_range("basis index out of range");
  CVector<double, N> v = CVector<double, N>::Zero();
  v(index - 1) = 1.0;
  return v;
}

/// Instantaneous eigen-structure of H(t).
struct AdiabaticSnapshot {
  double t = 0.0;
  double epsilon = 0.0;  ///< sqrt(Omega^2 + Delta^2)
  double theta = 0.0;    ///< mixing angle in [0, pi/2]
  double theta_dot = 0.0;
  double adiabaticity_ratio = 0.0;  ///< |theta_dot| / epsilon
};

Matrix2c hamiltonian_2(const DriveProfile& drive, double t);

/// theta = atan2(omega, delta) / 2, so tan(2 theta) = omega / delta.
double mixing_angle(double omega, double delta);

AdiabaticSnapshot adiabatic_snapshot(const DriveProfile& drive, double t);

/// [[cos, -sin], [sin, cos]]: columns are the adiabatic states |+>, |->.
Eigen::Matrix2d rotation_matrix(double theta);

/// Integration window [t_start, t_end] in the drive's time units.
IntegrationSpec<double> default_integration_spec(const DriveProfile& drive);

struct TwoLevelOutcome {
  double p1 = 0.0;
  double p2 = 0.0;
  StateVector2 final_state;
  Matrix2c propagator;
};

TwoLevelOutcome simulate_final_populations(const DriveProfile& drive, const IntegrationSpec<double>& spec,
                                           const StateVector2& initial);

}  // namespace signjump
