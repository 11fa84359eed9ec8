#pragma once

// Time-dependent Schroedinger propagation, i d/dt psi = H(t) psi (hbar = 1),
// for small dense Hamiltonians. The state may be a single column (a ket) or
// a block of columns (e.g. the identity, which yields the propagator).
//
// Adaptive mode is Dormand-Prince 5(4) with FSAL; fixed mode is classic RK4.
// When split_at_zero is set the window is cut at t = 0 and each segment is
// integrated separately, so no step straddles a parameter jump there. Stage
// times that land exactly on a segment end are nudged one ulp inward, which
// makes the Hamiltonian callback see the one-sided limit of a step function.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "signjump/errors.hpp"

namespace signjump {

template <typename Scalar, int N>
using CVector = Eigen::Matrix<std::complex<Scalar>, N, 1>;

template <typename Scalar, int N>
using CMatrix = Eigen::Matrix<std::complex<Scalar>, N, N>;

enum class StepMode { Adaptive, Fixed };

template <typename Scalar = double>
struct IntegrationSpec {
  Scalar t_start = Scalar(-20);
  Scalar t_end = Scalar(20);
  /// Initial step in adaptive mode, the step in fixed mode.
  Scalar step = Scalar(1e-2);
  /// Local error target per unit time (absolute + relative) in adaptive mode.
  Scalar tolerance = Scalar(1e-10);
  bool split_at_zero = true;
  StepMode mode = StepMode::Adaptive;
  std::size_t max_steps = 50'000'000;

  void validate() const {
    if (!std::isfinite(t_start) || !std::isfinite(t_end) || !(t_start < t_end))
      throw std::invalid_argument("integration window requires finite t_start < t_end");
    if (!(step > 0) || !std::isfinite(step)) throw std::invalid_argument("step must be positive");
    if (!(tolerance > 0) || !std::isfinite(tolerance))
      throw std::invalid_argument("tolerance must be positive");
  }

  /// Segment boundaries, in integration order.
  std::vector<Scalar> boundaries() const {
    if (split_at_zero && t_start < Scalar(0) && Scalar(0) < t_end) return {t_start, Scalar(0), t_end};
    return {t_start, t_end};
  }
};

template <typename Scalar, int N>
struct TrajectoryPoint {
  Scalar t;
  CVector<Scalar, N> state;
  Eigen::Matrix<Scalar, N, 1> populations;
};

template <typename Scalar, int N, int Cols = 1>
struct Propagation {
  Eigen::Matrix<std::complex<Scalar>, N, Cols> state;
  /// Filled only when requested, and only for single-column states.
  std::vector<TrajectoryPoint<Scalar, N>> trajectory;
  std::size_t accepted_steps = 0;
  std::size_t rejected_steps = 0;
};

template <typename Derived>
auto populations(const Eigen::MatrixBase<Derived>& state) {
  return state.cwiseAbs2().eval();
}

namespace detail {

template <typename Scalar>
struct Segment {
  Scalar from;
  Scalar to;

  // Keep stage times strictly inside the segment.
  Scalar clamp(Scalar t) const {
    const Scalar lo = std::min(from, to);
    const Scalar hi = std::max(from, to);
    if (t <= lo) return std::nextafter(lo, hi);
    if (t >= hi) return std::nextafter(hi, lo);
    return t;
  }
};

template <typename Scalar, int N, typename HamiltonianFn>
CMatrix<Scalar, N> sample_hamiltonian(HamiltonianFn& hamiltonian, Scalar t) {
  CMatrix<Scalar, N> h = hamiltonian(t);
  return h;
}

template <typename Scalar, int N>
void check_hermitian(const CMatrix<Scalar, N>& h, Scalar t) {
  const Scalar scale = std::max(Scalar(1), h.cwiseAbs().maxCoeff());
  const Scalar defect = (h - h.adjoint()).cwiseAbs().maxCoeff();
  if (!(defect <= Scalar(1e-12) * scale)) throw IntegrationError("non-Hermitian Hamiltonian sample", double(t));
}

template <typename Scalar, int N, int Cols>
void record(std::vector<TrajectoryPoint<Scalar, N>>* trajectory, Scalar t,
            const Eigen::Matrix<std::complex<Scalar>, N, Cols>& y) {
  if constexpr (Cols == 1) {
    if (trajectory) trajectory->push_back({t, y, populations(y)});
  }
}

// Dormand-Prince 5(4) tableau.
template <typename Scalar>
struct DormandPrince {
  static constexpr Scalar c2 = Scalar(1) / 5, c3 = Scalar(3) / 10, c4 = Scalar(4) / 5, c5 = Scalar(8) / 9;
  static constexpr Scalar a21 = Scalar(1) / 5;
  static constexpr Scalar a31 = Scalar(3) / 40, a32 = Scalar(9) / 40;
  static constexpr Scalar a41 = Scalar(44) / 45, a42 = Scalar(-56) / 15, a43 = Scalar(32) / 9;
  static constexpr Scalar a51 = Scalar(19372) / 6561, a52 = Scalar(-25360) / 2187, a53 = Scalar(64448) / 6561,
                          a54 = Scalar(-212) / 729;
  static constexpr Scalar a61 = Scalar(9017) / 3168, a62 = Scalar(-355) / 33, a63 = Scalar(46732) / 5247,
                          a64 = Scalar(49) / 176, a65 = Scalar(-5103) / 18656;
  static constexpr Scalar b1 = Scalar(35) / 384, b3 = Scalar(500) / 1113, b4 = Scalar(125) / 192,
                          b5 = Scalar(-2187) / 6784, b6 = Scalar(11) / 84;
  // b - b* (fifth minus fourth order weights)
  static constexpr Scalar e1 = Scalar(71) / 57600, e3 = Scalar(-71) / 16695, e4 = Scalar(71) / 1920,
                          e5 = Scalar(-17253) / 339200, e6 = Scalar(22) / 525, e7 = Scalar(-1) / 40;
};

template <typename Scalar, int N, int Cols, typename HamiltonianFn>
void adaptive_segment(HamiltonianFn& hamiltonian, Eigen::Matrix<std::complex<Scalar>, N, Cols>& y,
                      const Segment<Scalar>& seg, const IntegrationSpec<Scalar>& spec, Scalar& step_hint,
                      Propagation<Scalar, N, Cols>& out, std::vector<TrajectoryPoint<Scalar, N>>* trajectory) {
  using State = Eigen::Matrix<std::complex<Scalar>, N, Cols>;
  using T = DormandPrince<Scalar>;
  const std::complex<Scalar> minus_i(0, -1);
  auto rhs = [&](Scalar t, const State& s) -> State {
    return minus_i * (sample_hamiltonian<Scalar, N>(hamiltonian, seg.clamp(t)) * s);
  };

  const Scalar direction = seg.to > seg.from ? Scalar(1) : Scalar(-1);
  const Scalar length = std::abs(seg.to - seg.from);
  Scalar t = seg.from;
  Scalar h = std::min(step_hint, length);
  const Scalar tol = spec.tolerance;

  check_hermitian<Scalar, N>(sample_hamiltonian<Scalar, N>(hamiltonian, seg.clamp(t)), t);
  State k1 = rhs(t, y);
  bool last_rejected = false;

  while (direction * (seg.to - t) > 0) {
    const Scalar remaining = std::abs(seg.to - t);
    const bool final_step = h >= remaining;
    const Scalar h_full = h;
    if (final_step) h = remaining;
    const Scalar hs = direction * h;

    const State k2 = rhs(t + T::c2 * hs, y + hs * (T::a21 * k1));
    const State k3 = rhs(t + T::c3 * hs, y + hs * (T::a31 * k1 + T::a32 * k2));
    const State k4 = rhs(t + T::c4 * hs, y + hs * (T::a41 * k1 + T::a42 * k2 + T::a43 * k3));
    const State k5 = rhs(t + T::c5 * hs, y + hs * (T::a51 * k1 + T::a52 * k2 + T::a53 * k3 + T::a54 * k4));
    const State k6 =
        rhs(t + hs, y + hs * (T::a61 * k1 + T::a62 * k2 + T::a63 * k3 + T::a64 * k4 + T::a65 * k5));
    const State y_new = y + hs * (T::b1 * k1 + T::b3 * k3 + T::b4 * k4 + T::b5 * k5 + T::b6 * k6);
    const Scalar t_new = final_step ? seg.to : t + hs;
    const State k7 = rhs(t_new, y_new);
    const State err = hs * (T::e1 * k1 + T::e3 * k3 + T::e4 * k4 + T::e5 * k5 + T::e6 * k6 + T::e7 * k7);

    // Error per unit step: the accepted local error shrinks with h, so the
    // summed error over the window stays of order tol * (t_end - t_start).
    const Scalar step_tol = tol * std::min(h, Scalar(1));
    const auto scale = ((y.cwiseAbs().cwiseMax(y_new.cwiseAbs()).array() + Scalar(1)) * step_tol).eval();
    const Scalar err_norm = (err.cwiseAbs().array() / scale).maxCoeff();

    if (!std::isfinite(err_norm)) throw IntegrationError("non-finite error estimate", double(t));

    if (err_norm <= Scalar(1)) {
      t = t_new;
      y = y_new;
      k1 = k7;
      ++out.accepted_steps;
      record(trajectory, t, y);
      Scalar factor = err_norm == Scalar(0) ? Scalar(5) : Scalar(0.9) * std::pow(err_norm, Scalar(-0.2));
      factor = std::clamp(factor, Scalar(0.2), last_rejected ? Scalar(1) : Scalar(5));
      // A step truncated to hit the segment end says nothing about the next one.
      h = final_step ? h_full : h * factor;
      last_rejected = false;
    } else {
      ++out.rejected_steps;
      h *= std::max(Scalar(0.2), Scalar(0.9) * std::pow(err_norm, Scalar(-0.2)));
      last_rejected = true;
    }

    const Scalar floor = Scalar(16) * std::numeric_limits<Scalar>::epsilon() * std::max(Scalar(1), std::abs(t));
    if (h < floor) throw IntegrationError("step size underflow", double(t));
    if (out.accepted_steps + out.rejected_steps > spec.max_steps)
      throw IntegrationError("step budget exhausted", double(t));
  }
  step_hint = h;
}

template <typename Scalar, int N, int Cols, typename HamiltonianFn>
void fixed_segment(HamiltonianFn& hamiltonian, Eigen::Matrix<std::complex<Scalar>, N, Cols>& y,
                   const Segment<Scalar>& seg, const IntegrationSpec<Scalar>& spec,
                   Propagation<Scalar, N, Cols>& out, std::vector<TrajectoryPoint<Scalar, N>>* trajectory) {
  using State = Eigen::Matrix<std::complex<Scalar>, N, Cols>;
  const std::complex<Scalar> minus_i(0, -1);
  auto rhs = [&](Scalar t, const State& s) -> State {
    return minus_i * (sample_hamiltonian<Scalar, N>(hamiltonian, seg.clamp(t)) * s);
  };

  check_hermitian<Scalar, N>(sample_hamiltonian<Scalar, N>(hamiltonian, seg.clamp(seg.from)), seg.from);
  const Scalar length = seg.to - seg.from;
  const auto steps = static_cast<std::size_t>(std::ceil(std::abs(length) / spec.step - Scalar(1e-9)));
  const std::size_t n = std::max<std::size_t>(steps, 1);
  const Scalar h = length / Scalar(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Scalar t = seg.from + Scalar(i) * h;
    const State k1 = rhs(t, y);
    const State k2 = rhs(t + h / 2, y + (h / 2) * k1);
    const State k3 = rhs(t + h / 2, y + (h / 2) * k2);
    const State k4 = rhs(t + h, y + h * k3);
    y += (h / 6) * (k1 + Scalar(2) * k2 + Scalar(2) * k3 + k4);
    ++out.accepted_steps;
    record(trajectory, i + 1 == n ? seg.to : t + h, y);
  }
}

template <typename Scalar, int N, int Cols, typename HamiltonianFn>
Propagation<Scalar, N, Cols> run(HamiltonianFn& hamiltonian, const Eigen::Matrix<std::complex<Scalar>, N, Cols>& y0,
                                 const IntegrationSpec<Scalar>& spec, bool forward, bool record_trajectory) {
  spec.validate();
  if (y0.rows() == 0) throw std::invalid_argument("empty state");

  Propagation<Scalar, N, Cols> out;
  out.state = y0;
  auto* trajectory = (record_trajectory && Cols == 1) ? &out.trajectory : nullptr;

  std::vector<Scalar> cuts = spec.boundaries();
  if (!forward) std::reverse(cuts.begin(), cuts.end());
  record(trajectory, cuts.front(), out.state);

  Scalar step_hint = spec.step;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const Segment<Scalar> seg{cuts[i], cuts[i + 1]};
    if (spec.mode == StepMode::Adaptive)
      adaptive_segment(hamiltonian, out.state, seg, spec, step_hint, out, trajectory);
    else
      fixed_segment(hamiltonian, out.state, seg, spec, out, trajectory);
  }
  return out;
}

}  // namespace detail

/// Evolves psi0 from spec.t_start to spec.t_end. `hamiltonian(t)` must return
/// an N x N Hermitian matrix. Memory is O(1) unless a trajectory is requested.
template <typename Scalar, int N, int Cols, typename HamiltonianFn>
Propagation<Scalar, N, Cols> propagate(HamiltonianFn&& hamiltonian,
                                       const Eigen::Matrix<std::complex<Scalar>, N, Cols>& psi0,
                                       const IntegrationSpec<Scalar>& spec, bool record_trajectory = false) {
  if (std::abs(psi0.squaredNorm() / Scalar(psi0.cols()) - Scalar(1)) > Scalar(1e-9))
    throw std::invalid_argument("initial state is not normalized");
  return detail::run(hamiltonian, psi0, spec, true, record_trajectory);
}

/// Same drive, integrated from spec.t_end back to spec.t_start.
template <typename Scalar, int N, int Cols, typename HamiltonianFn>
Propagation<Scalar, N, Cols> propagate_backward(HamiltonianFn&& hamiltonian,
                                                const Eigen::Matrix<std::complex<Scalar>, N, Cols>& psi_end,
                                                const IntegrationSpec<Scalar>& spec,
                                                bool record_trajectory = false) {
  return detail::run(hamiltonian, psi_end, spec, false, record_trajectory);
}

/// U(t_end, t_start) in the basis of the Hamiltonian: every basis column is
/// propagated (jointly, under one step-size controller).
template <typename Scalar, int N, typename HamiltonianFn>
CMatrix<Scalar, N> build_propagator(HamiltonianFn&& hamiltonian, const IntegrationSpec<Scalar>& spec) {
  static_assert(N != Eigen::Dynamic, "build_propagator needs a fixed dimension");
  const CMatrix<Scalar, N> identity = CMatrix<Scalar, N>::Identity();
  return detail::run(hamiltonian, identity, spec, true, false).state;
}

/// Deviation of U from unitarity, max |U^dagger U - 1|.
template <typename Derived>
auto unitarity_defect(const Eigen::MatrixBase<Derived>& u) {
  const auto gram = (u.adjoint() * u).eval();
  using Gram = std::decay_t<decltype(gram)>;
  return (gram - Gram::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
}

/// Adaptive Gauss-Kronrod (15-point) integral of g over [a, b] to the given
/// relative tolerance. Throws std::domain_error on a non-finite sample.
template <typename Scalar, typename Fn>
Scalar quadrature(Fn&& g, Scalar a, Scalar b, Scalar tolerance) {
  if (!(tolerance > 0)) throw std::invalid_argument("quadrature tolerance must be positive");
  if (!std::isfinite(a) || !std::isfinite(b)) throw std::invalid_argument("quadrature limits must be finite");
  if (a == b) return Scalar(0);
  auto checked = [&g](Scalar t) -> Scalar {
    const Scalar v = g(t);
    if (!std::isfinite(v)) throw std::domain_error("non-finite integrand sample");
    return v;
  };
  return boost::math::quadrature::gauss_kronrod<Scalar, 15>::integrate(checked, a, b, 30, tolerance);
}

}  // namespace signjump
