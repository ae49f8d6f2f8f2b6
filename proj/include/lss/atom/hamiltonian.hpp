#pragma once

#include <Eigen/Dense>

#include "lss/model/field.hpp"
#include "lss/model/level_scheme.hpp"

namespace lss {

struct LegAssignment {
  Ground control_ground = Ground::plus;
  Ground signal_ground = Ground::minus;
  bool standard = true;  // sigma- control, sigma+ signal
};

// Throws ConfigError when both fields would drive the same leg.
LegAssignment resolve_legs(const FieldConfig& control, const FieldConfig& signal);

// Rotating-wave Hamiltonian in rad/s (hbar = 1) over the scheme basis.
//
// The signal's ground state is the energy reference. The primary excited level
// sits at -Delta_S and the control's ground state at -2*pi*delta_r, with
// Delta_S = Delta_C + 2*pi*delta_r and Delta_C the control's one-photon
// detuning. Couplings are -Omega/2. With four-level dynamics the second excited
// level sits hyperfine_offset above the primary one and couples through the
// ratio of secondary to primary Clebsch-Gordan amplitudes.
Eigen::MatrixXcd build_hamiltonian(const LevelScheme& scheme, const FieldConfig& control,
                                   const FieldConfig& signal, double delta_r);

}  // namespace lss
