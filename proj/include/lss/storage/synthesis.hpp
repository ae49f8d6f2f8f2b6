#pragma once

#include "lss/model/experiment_config.hpp"
#include "lss/model/pulse_sequence.hpp"
#include "lss/storage/trace.hpp"

namespace lss {

// Noise-free parameters of the two beat epochs a storage run produces.
struct StorageBeats {
  double f_input = 0.0;      // Hz, Zeeman splitting + delta_r
  double f_retrieved = 0.0;  // Hz, see retrieved_beat_frequency
  double input_amplitude = 0.0;
  double retrieved_amplitude = 0.0;  // at the start of readout
  double input_dc = 0.0;
  double readout_dc = 0.0;
  double preparation_dc = 0.0;
  double theta_input = 0.0;
  double theta_readout = 0.0;
  double stored_phase = 0.0;   // beat phase when the input switches off
  double readout_phase = 0.0;  // beat phase when the readout starts
};

StorageBeats storage_beats(const ExperimentConfig& config, const PulseSequence& sequence);

// Photodiode record of the full sequence. The detector sees the leaked control
// (DC) plus the heterodyne term between signal and control:
//   preparation: leak * I_C
//   input:       I_S + leak * I_C + 2 sqrt(I_S leak I_C) sin(2 pi f_in t + phi)
//   storage:     0
//   readout:     leak * I_R + A_R exp(-(t - t_read)/tau) sin(2 pi f_B t + phi')
// plus white Gaussian noise of trace_noise_sigma drawn from rng_seed.
// Throws ConfigError on a Nyquist violation or a non-integer sample count.
PhotodiodeTrace simulate_storage(const ExperimentConfig& config, const PulseSequence& sequence);

}  // namespace lss
