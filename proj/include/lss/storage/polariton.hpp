#pragma once

#include <cmath>

#include "lss/atom/light_shift.hpp"
#include "lss/model/magnetic.hpp"

namespace lss {

// Dark-state polariton Psi = cos(theta) E_S + sin(theta) sqrt(N) sigma_{-+}.
struct PolaritonState {
  double theta = 0.0;  // mixing angle, rad
  double photonic_amplitude = 1.0;
  double spin_amplitude = 0.0;
  double stored_phase = 0.0;  // rad
  double stored_amplitude = 0.0;

  static PolaritonState from_angle(double theta, double stored_amplitude = 0.0,
                                   double stored_phase = 0.0);
  PolaritonState rotated_to(double new_theta) const;

  double normalization_error() const {
    return std::abs(photonic_amplitude * photonic_amplitude + spin_amplitude * spin_amplitude - 1.0);
  }
};

// tan(theta) = g sqrt(N) / Omega_C, theta in [0, pi/2]. Throws
// std::domain_error for negative inputs or when g sqrt(N) = Omega_C = 0.
double mixing_angle(double g, double n_density, double omega_c);

// delta_R (1 - cos alpha) cos^2 theta, Hz.
double frequency_pulling(double delta_r, double alpha, double theta);

// Beat frequency of the retrieved signal with the readout control: the
// ground-state splitting plus the readout light shift plus non-collinear
// frequency pulling. Independent of delta_r when alpha = 0.
double retrieved_beat_frequency(const MagneticEnvironment& magnetic, double readout_intensity,
                                const LightShiftModel& shift_model, double alpha, double theta,
                                double delta_r);

struct RetrievedField {
  double amplitude = 0.0;
  double phase = 0.0;  // rad, carried entirely by the stored spin wave
};

// Reduced polariton bookkeeping: the input field maps onto a polariton of
// amplitude input/cos(theta_in), is stored as a pure spin wave, and leaves
// with photonic fraction cos(theta_out); losses enter as sqrt(efficiency).
// Throws std::domain_error for negative amplitude or theta_in >= pi/2.
RetrievedField storage_round_trip(double theta_in, double theta_out, double input_amplitude,
                                  double efficiency = 1.0, double stored_phase = 0.0);

}  // namespace lss
