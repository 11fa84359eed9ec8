#pragma once

// Three-state chain with SU(2) symmetry, H3 = -Delta S_z + Omega S_x for spin 1.
// Its propagator is the spin-1 image of the two-level (a, b).

#include <Eigen/Dense>

#include "signjump/stepwise.hpp"

namespace signjump {

/// Rows are initial states |1>, |2>, |3>; columns are final states.
struct TransitionTable {
  Eigen::Matrix3d probabilities = Eigen::Matrix3d::Zero();

  double operator()(int from, int to) const { return probabilities(from - 1, to - 1); }
  /// Largest deviation of any row or column sum from one.
  double stochasticity_defect() const;
};

Matrix3c hamiltonian_3(const DriveProfile& drive, double t);

/// Spin-1 representation of [[a, b], [-b*, a*]]:
///   [[ a^2,          sqrt2 a b,   b^2        ],
///    [ -sqrt2 a b*,  |a|^2-|b|^2, sqrt2 a* b ],
///    [ b*^2,         -sqrt2 a* b*, a*^2      ]]
/// Throws std::invalid_argument when |a|^2 + |b|^2 deviates from 1 by more than 1e-9.
Matrix3c majorana_u3(const CayleyKlein& ck);

/// |U_ij|^2 arranged as from-row/to-column (i.e. the transpose of |U|^2).
TransitionTable transition_table(const Matrix3c& u3);

/// Closed-form table in terms of s^2 = Delta0^2/(Omega0^2+Delta0^2), c^2 = 1 - s^2.
TransitionTable analytic_transition_table(double omega0, double delta0);

/// Leading-order Omega0 >> Delta0 expansion of the analytic table.
TransitionTable strong_coupling_table(double omega0, double delta0);

struct ThreeLevelOutcome {
  Eigen::Vector3d populations;
  Matrix3c propagator;
};

ThreeLevelOutcome simulate_three_level(const DriveProfile& drive, const IntegrationSpec<double>& spec,
                                       int initial_index);

/// max |U3(numeric) - majorana_u3(extract_cayley_klein(U2(numeric)))| for the
/// same drive and integration settings.
double majorana_residual(const DriveProfile& drive, const IntegrationSpec<double>& spec);

}  // namespace signjump
