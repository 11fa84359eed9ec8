#include "signjump/pulse.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <stdexcept>
#include <string>

namespace signjump {

namespace {

void require_finite(double t) {
  if (!std::isfinite(t)) throw std::domain_error("pulse evaluated at non-finite time");
}

}  // namespace

std::string_view to_string(ShapeKind kind) {
  switch (kind) {
    case ShapeKind::Gaussian:
      return "gaussian";
    case ShapeKind::Sech:
      return "sech";
    case ShapeKind::Lorentzian:
      return "lorentzian";
  }
  return "unknown";
}

ShapeKind parse_shape_kind(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "gaussian") return ShapeKind::Gaussian;
  if (lower == "sech") return ShapeKind::Sech;
  if (lower == "lorentzian") return ShapeKind::Lorentzian;
  throw std::invalid_argument("unknown pulse shape '" + std::string(name) +
                              "' (expected gaussian, sech or lorentzian)");
}

PulseShape::PulseShape(ShapeKind k, double w) : kind(k), width(w) {
  if (!(w > 0.0) || !std::isfinite(w)) throw std::invalid_argument("pulse width must be positive");
}

double PulseShape::evaluate(double t) const {
  require_finite(t);
  const double x = t / width;
  switch (kind) {
    case ShapeKind::Gaussian:
      return std::exp(-0.5 * x * x);
    case ShapeKind::Sech:
      return 1.0 / std::cosh(x);
    case ShapeKind::Lorentzian:
      return 1.0 / (1.0 + x * x);
  }
  return 0.0;
}

double PulseShape::derivative(double t) const {
  require_finite(t);
  const double x = t / width;
  const double f = evaluate(t);
  switch (kind) {
    case ShapeKind::Gaussian:
      return -(x / width) * f;
    case ShapeKind::Sech:
      return -(std::tanh(x) / width) * f;
    case ShapeKind::Lorentzian:
      return -(2.0 * x / width) * f * f;
  }
  return 0.0;
}

DetuningProfile::DetuningProfile(double m, double tau) : magnitude(m), smoothing_time(tau) {
  if (!(m > 0.0) || !std::isfinite(m)) throw std::invalid_argument("detuning magnitude must be positive");
  if (!(tau >= 0.0) || !std::isfinite(tau))
    throw std::invalid_argument("jump smoothing time must be non-negative");
}

double DetuningProfile::value(double t) const {
  require_finite(t);
  if (is_step()) return t <= 0.0 ? magnitude : -magnitude;
  return -magnitude * std::tanh(t / smoothing_time);
}

double DetuningProfile::derivative(double t) const {
  require_finite(t);
  if (is_step()) return 0.0;
  const double sech = 1.0 / std::cosh(t / smoothing_time);
  return -magnitude * sech * sech / smoothing_time;
}

DriveProfile::DriveProfile(PulseShape s, double omega0, DetuningProfile d)
    : shape(s), peak_rabi(omega0), detuning(d) {
  if (!(omega0 >= 0.0) || !std::isfinite(omega0))
    throw std::invalid_argument("peak Rabi frequency must be non-negative");
}

double evaluate_shape(const PulseShape& shape, double t) { return shape.evaluate(t); }

double evaluate_detuning(const DetuningProfile& d, double t) { return d.value(t); }

}  // namespace signjump
