#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lss/atom/light_shift.hpp"
#include "lss/model/field.hpp"
#include "lss/model/level_scheme.hpp"
#include "lss/model/magnetic.hpp"
#include "lss/model/pulse_sequence.hpp"

namespace lss {

// Phase durations of the standard storage sequence, seconds.
struct SequenceTiming {
  double preparation = 20e-6;
  double input = 50e-6;
  double storage = 5e-6;
  double readout = 40e-6;
};

struct ExperimentConfig {
  LevelScheme level_scheme;
  FieldConfig control;
  FieldConfig signal;
  // Control intensity during the readout phase; equals control.intensity when
  // unset.
  std::optional<double> readout_intensity;

  MagneticEnvironment magnetic;
  double delta_r = 0.0;  // Hz

  double kappa = 0.0;         // (rad/s)^2 per unit I/I_sat
  double optical_depth = 0.0;  // scales absorption into transmission
  LightShiftModel light_shift;

  double sample_rate = 0.0;  // samples/s
  double trace_noise_sigma = 0.0;
  double control_leak_fraction = 0.0;
  double storage_efficiency = 0.0;
  double retrieval_decay_time = 0.0;  // s
  double collective_coupling = 0.0;   // g*sqrt(N), rad/s

  SequenceTiming timing;
  std::uint64_t rng_seed = 1;

  double readout_control_intensity() const {
    return readout_intensity.value_or(control.intensity);
  }

  // Rabi frequency of the control leg from an arbitrary intensity, using this
  // configuration's kappa and Clebsch-Gordan weights.
  double control_rabi(double intensity) const;
  double signal_rabi(double intensity) const;
  double readout_rabi() const { return control_rabi(readout_control_intensity()); }

  FieldConfig readout_control() const;

  // Copies with the named quantity changed and derived Rabi frequencies
  // recomputed.
  ExperimentConfig with_control_intensity(double intensity) const;
  ExperimentConfig with_readout_intensity(double intensity) const;
  ExperimentConfig with_signal_intensity(double intensity) const;
  ExperimentConfig with_delta_r(double delta_r_hz) const;
  ExperimentConfig with_kappa(double kappa) const;

  // Recomputes both fields' Rabi frequencies from intensity and kappa.
  void refresh_rabi_frequencies();

  PulseSequence pulse_sequence() const;
};

// Calibrated defaults: 87Rb D1, P_C = 300 uW and P_S = 100 uW over a 0.9 mm
// beam, B0 = 0.49 G.
ExperimentConfig default_config();

// Throws ConfigError on hard violations, returns soft warnings.
std::vector<std::string> validate(const ExperimentConfig& config);

// Weight of the transition a field drives as its primary leg.
double primary_leg_weight(const LevelScheme& scheme, const FieldConfig& field);

}  // namespace lss
