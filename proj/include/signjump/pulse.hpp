#pragma once

// Control fields of the detuning-sign-jump protocol: a smooth, peak-normalized
// coupling envelope and a detuning of constant magnitude that flips sign at
// the pulse maximum (t = 0). Time is in units of the pulse width unless the
// caller chooses otherwise; hbar = 1.

#include <string_view>

namespace signjump {

enum class ShapeKind { Gaussian, Sech, Lorentzian };

std::string_view to_string(ShapeKind kind);
/// Accepts "gaussian", "sech", "lorentzian" (case-insensitive).
ShapeKind parse_shape_kind(std::string_view name);

/// Envelope f(t) with f(0) = 1.
///   Gaussian:   exp(-t^2 / 2T^2)
///   Sech:       sech(t / T)
///   Lorentzian: 1 / (1 + (t/T)^2)
struct PulseShape {
  ShapeKind kind = ShapeKind::Gaussian;
  double width = 1.0;

  PulseShape() = default;
  PulseShape(ShapeKind k, double w);

  double operator()(double t) const { return evaluate(t); }
  double evaluate(double t) const;
  /// df/dt, analytic.
  double derivative(double t) const;
};

/// Sign-flipping detuning. With smoothing_time == 0 this is the ideal step
/// +magnitude (t <= 0), -magnitude (t > 0); otherwise -magnitude*tanh(t/tau).
struct DetuningProfile {
  double magnitude = 1.0;
  double smoothing_time = 0.0;

  DetuningProfile() = default;
  DetuningProfile(double magnitude, double smoothing_time = 0.0);

  bool is_step() const { return smoothing_time == 0.0; }
  double value(double t) const;
  /// dDelta/dt away from an ideal step; zero on either side of it.
  double derivative(double t) const;
};

/// Rabi frequency Omega(t) = peak_rabi * shape(t) together with the detuning.
struct DriveProfile {
  PulseShape shape;
  double peak_rabi = 0.0;
  DetuningProfile detuning;

  DriveProfile() = default;
  DriveProfile(PulseShape shape, double peak_rabi, DetuningProfile detuning);

  double rabi(double t) const { return peak_rabi * shape.evaluate(t); }
  double rabi_derivative(double t) const { return peak_rabi * shape.derivative(t); }
  double detuning_at(double t) const { return detuning.value(t); }
};

double evaluate_shape(const PulseShape& shape, double t);
double evaluate_detuning(const DetuningProfile& d, double t);

}  // namespace signjump
