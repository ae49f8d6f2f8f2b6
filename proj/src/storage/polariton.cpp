#include "lss/storage/polariton.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace lss {

PolaritonState PolaritonState::from_angle(double theta, double stored_amplitude,
                                          double stored_phase) {
  PolaritonState p;
  p.theta = theta;
  p.photonic_amplitude = std::cos(theta);
  p.spin_amplitude = std::sin(theta);
  p.stored_amplitude = stored_amplitude;
  p.stored_phase = stored_phase;
  return p;
}

PolaritonState PolaritonState::rotated_to(double new_theta) const {
  return from_angle(new_theta, stored_amplitude, stored_phase);
}

double mixing_angle(double g, double n_density, double omega_c) {
  if (g < 0.0 || n_density < 0.0 || omega_c < 0.0) {
    throw std::domain_error("mixing_angle: negative coupling, density or Rabi frequency");
  }
  const double num = g * std::sqrt(n_density);
  if (num == 0.0 && omega_c == 0.0) {
    throw std::domain_error("mixing_angle: undefined for g*sqrt(N) = Omega_C = 0");
  }
  return std::atan2(num, omega_c);
}

double frequency_pulling(double delta_r, double alpha, double theta) {
  const double c = std::cos(theta);
  return delta_r * (1.0 - std::cos(alpha)) * c * c;
}

double retrieved_beat_frequency(const MagneticEnvironment& magnetic, double readout_intensity,
                                const LightShiftModel& shift_model, double alpha, double theta,
                                double delta_r) {
  return magnetic.zeeman_splitting() + ac_stark_shift(readout_intensity, shift_model) +
         frequency_pulling(delta_r, alpha, theta);
}

RetrievedField storage_round_trip(double theta_in, double theta_out, double input_amplitude,
                                  double efficiency, double stored_phase) {
  if (input_amplitude < 0.0) throw std::domain_error("storage_round_trip: negative amplitude");
  const double c_in = std::cos(theta_in);
  if (!(theta_in < 0.5 * std::numbers::pi) || c_in <= 0.0) {
    throw std::domain_error("storage_round_trip: theta_in must be below pi/2");
  }
  // Storage is the rotation to theta = pi/2: the whole polariton is spin wave.
  const auto stored = PolaritonState::from_angle(theta_in, input_amplitude / c_in, stored_phase)
                          .rotated_to(0.5 * std::numbers::pi);
  const auto readout = stored.rotated_to(theta_out);
  // cos(pi/2) is not exactly zero in floating point.
  const double photonic = theta_out >= 0.5 * std::numbers::pi ? 0.0 : readout.photonic_amplitude;
  return {std::sqrt(efficiency) * readout.stored_amplitude * photonic, readout.stored_phase};
}

}  // namespace lss
