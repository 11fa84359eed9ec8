#pragma once

// Adiabatic-sudden model of the sign-jump protocol: adiabatic evolution on
// either side of t = 0, joined by an instantaneous rotation of the adiabatic
// basis by the change of mixing angle across the jump.

#include <complex>

#include "signjump/two_level.hpp"

namespace signjump {

/// Half of the accumulated adiabatic phases, delta_- = (1/2) int_{t_i}^0 eps
/// and delta_+ = (1/2) int_0^{t_f} eps.
struct PhasePair {
  double delta_minus = 0.0;
  double delta_plus = 0.0;
};

/// Mixing angles on either side of the jump, and their difference
/// delta_theta = theta_minus - theta_plus.
struct JumpAngles {
  double theta_minus = 0.0;
  double theta_plus = 0.0;
  double delta_theta = 0.0;
};

/// U = [[a, b], [-conj(b), conj(a)]] with |a|^2 + |b|^2 = 1.
struct CayleyKlein {
  std::complex<double> a;
  std::complex<double> b;

  double norm_defect() const { return std::abs(std::norm(a) + std::norm(b) - 1.0); }
  Matrix2c matrix() const;
};

PhasePair accumulate_phases(const DriveProfile& drive, double t_start, double t_end, double tolerance = 1e-12);

JumpAngles jump_angles(const DriveProfile& drive);
JumpAngles jump_angles(double theta_minus, double theta_plus);

/// diag(e^{i d+}, e^{-i d+}) . R(delta_theta) . diag(e^{i d-}, e^{-i d-}),
/// acting on adiabatic amplitudes (a+, a-).
Matrix2c piecewise_propagator_adiabatic(const PhasePair& phases, const JumpAngles& angles);

/// R(pi/2) . U_ad . R(0)^T: the diabatic-basis propagator for asymptotically
/// uncoupled endpoints.
Matrix2c diabatic_propagator(const PhasePair& phases, const JumpAngles& angles);

CayleyKlein cayley_klein(const PhasePair& phases, const JumpAngles& angles);

/// Reads (a, b) off a numeric two-level propagator after removing its
/// determinant phase, so the result describes an SU(2) element.
CayleyKlein extract_cayley_klein(const Matrix2c& u);

/// Final upper-state population Omega0^2 / (Omega0^2 + Delta0^2), evaluated
/// both as cos^2(delta_theta) and as the ratio; throws std::logic_error if
/// the two disagree beyond 1e-12.
double analytic_p2(double omega0, double delta0);

}  // namespace signjump
