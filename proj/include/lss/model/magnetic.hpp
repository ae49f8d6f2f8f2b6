#pragma once

#include "lss/model/constants.hpp"

namespace lss {

struct MagneticEnvironment {
  double b0 = 0.0;  // gauss
  double g_f = constants::kLandeF2;
  double bohr_magneton_over_h = constants::kBohrMagnetonOverH;  // Hz/G

  // Splitting between |g-> and |g+> (Delta m_F = 2), Hz.
  double zeeman_splitting() const { return 2.0 * g_f * bohr_magneton_over_h * b0; }
};

// Two-photon Raman detuning in Hz from optical angular frequencies (rad/s).
// Positive when the signal is blue of the Raman resonance.
double two_photon_detuning(double omega_s, double omega_c, const MagneticEnvironment& magnetic);

}  // namespace lss
