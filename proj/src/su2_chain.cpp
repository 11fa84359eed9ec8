#include "signjump/su2_chain.hpp"

#include <cmath>
#include <stdexcept>

namespace signjump {

double TransitionTable::stochasticity_defect() const {
  const double rows = (probabilities.rowwise().sum().array() - 1.0).abs().maxCoeff();
  const double cols = (probabilities.colwise().sum().array() - 1.0).abs().maxCoeff();
  return std::max(rows, cols);
}

Matrix3c hamiltonian_3(const DriveProfile& drive, double t) {
  const double coupling = drive.rabi(t) / std::sqrt(2.0);
  const double delta = drive.detuning_at(t);
  Matrix3c h;
  h << -delta, coupling, 0.0,
       coupling, 0.0, coupling,
       0.0, coupling, delta;
  return h;
}

Matrix3c majorana_u3(const CayleyKlein& ck) {
  if (ck.norm_defect() > 1e-9) throw std::invalid_argument("Cayley-Klein pair is not normalized");
  const std::complex<double> a = ck.a, b = ck.b;
  const std::complex<double> ac = std::conj(a), bc = std::conj(b);
  const double r2 = std::sqrt(2.0);
  Matrix3c u;
  u << a * a, r2 * a * b, b * b,
       -r2 * a * bc, std::norm(a) - std::norm(b), r2 * ac * b,
       bc * bc, -r2 * ac * bc, ac * ac;
  return u;
}

TransitionTable transition_table(const Matrix3c& u3) {
  TransitionTable table;
  table.probabilities = u3.cwiseAbs2().transpose();
  return table;
}

TransitionTable analytic_transition_table(double omega0, double delta0) {
  if (!(delta0 > 0.0)) throw std::domain_error("transition table requires Delta0 > 0");
  if (!(omega0 >= 0.0)) throw std::domain_error("transition table requires Omega0 >= 0");
  const double c2 = analytic_p2(omega0, delta0);
  const double s2 = delta0 * delta0 / (omega0 * omega0 + delta0 * delta0);
  const double mixed = 2.0 * s2 * c2;
  const double diff = s2 - c2;
  TransitionTable table;
  table.probabilities << s2 * s2, mixed, c2 * c2,
                         mixed, diff * diff, mixed,
                         c2 * c2, mixed, s2 * s2;
  return table;
}

TransitionTable strong_coupling_table(double omega0, double delta0) {
  if (!(omega0 > 0.0)) throw std::domain_error("strong-coupling limit requires Omega0 > 0");
  const double x = (delta0 / omega0) * (delta0 / omega0);
  TransitionTable table;
  table.probabilities << 0.0, 2.0 * x, 1.0 - 2.0 * x,
                         2.0 * x, 1.0 - 4.0 * x, 2.0 * x,
                         1.0 - 2.0 * x, 2.0 * x, 0.0;
  return table;
}

ThreeLevelOutcome simulate_three_level(const DriveProfile& drive, const IntegrationSpec<double>& spec,
                                       int initial_index) {
  const StateVector3 initial = basis_state<3>(initial_index);
  ThreeLevelOutcome out;
  out.propagator = build_propagator<double, 3>([&drive](double t) { return hamiltonian_3(drive, t); }, spec);
  out.populations = populations(out.propagator * initial);
  return out;
}

double majorana_residual(const DriveProfile& drive, const IntegrationSpec<double>& spec) {
  const Matrix2c u2 = build_propagator<double, 2>([&drive](double t) { return hamiltonian_2(drive, t); }, spec);
  const Matrix3c u3 = build_propagator<double, 3>([&drive](double t) { return hamiltonian_3(drive, t); }, spec);
  return (u3 - majorana_u3(extract_cayley_klein(u2))).cwiseAbs().maxCoeff();
}

}  // namespace signjump
