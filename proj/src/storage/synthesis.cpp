#include "lss/storage/synthesis.hpp"

#include <cmath>
#include <random>
#include <string>

#include "lss/errors.hpp"
#include "lss/model/constants.hpp"
#include "lss/storage/polariton.hpp"

namespace lss {

StorageBeats storage_beats(const ExperimentConfig& c, const PulseSequence& seq) {
  using constants::kTwoPi;
  const auto& input = seq.phase(Phase::input);
  const auto& storage = seq.phase(Phase::storage);

  StorageBeats b;
  const double i_c = c.control.intensity;
  const double i_r = c.readout_control_intensity();
  const double i_s = c.signal.intensity;
  const double leak = c.control_leak_fraction;
  const double zeeman = c.magnetic.zeeman_splitting();

  b.theta_input = mixing_angle(c.collective_coupling, 1.0, c.control.rabi_frequency);
  b.theta_readout = mixing_angle(c.collective_coupling, 1.0, c.readout_rabi());

  b.f_input = zeeman + c.delta_r;
  b.f_retrieved = retrieved_beat_frequency(c.magnetic, i_r, c.light_shift, c.signal.angle_alpha,
                                           b.theta_readout, c.delta_r);
  b.preparation_dc = leak * i_c;
  b.input_dc = i_s + leak * i_c;
  b.readout_dc = leak * i_r;
  b.input_amplitude = 2.0 * std::sqrt(i_s * leak * i_c);

  // The spin wave keeps the beat phase at switch-off and precesses at the bare
  // splitting while both fields are dark.
  b.stored_phase = kTwoPi * b.f_input * input.duration();
  b.readout_phase = b.stored_phase + kTwoPi * zeeman * storage.duration();

  const auto retrieved = storage_round_trip(b.theta_input, b.theta_readout, std::sqrt(i_s),
                                            c.storage_efficiency, b.stored_phase);
  b.retrieved_amplitude = 2.0 * std::sqrt(leak * i_r) * retrieved.amplitude;
  return b;
}

PhotodiodeTrace simulate_storage(const ExperimentConfig& c, const PulseSequence& seq) {
  using constants::kTwoPi;
  const double nyquist = 4.0 * (c.magnetic.zeeman_splitting() + std::abs(c.delta_r));
  if (!(c.sample_rate > nyquist)) {
    throw ConfigError("simulate_storage: sample_rate " + std::to_string(c.sample_rate) +
                      " S/s is below 4x the highest beat frequency");
  }
  const double n_exact = seq.duration() * c.sample_rate;
  const double n_round = std::round(n_exact);
  if (std::abs(n_exact - n_round) > 1e-6 * std::max(1.0, n_exact)) {
    throw ConfigError("simulate_storage: sequence duration is not a whole number of samples");
  }

  const StorageBeats b = storage_beats(c, seq);
  const auto& input = seq.phase(Phase::input);
  const auto& readout = seq.phase(Phase::readout);

  PhotodiodeTrace trace;
  trace.t0 = seq.t_begin();
  trace.sample_rate = c.sample_rate;
  trace.phase_markers = markers_from(seq);
  trace.samples.resize(static_cast<std::size_t>(n_round));

  for (std::size_t i = 0; i < trace.samples.size(); ++i) {
    const double t = trace.time_at(i);
    const auto& seg = seq.segment_at(t);
    double v = 0.0;
    switch (seg.phase) {
      case Phase::preparation:
        v = b.preparation_dc;
        break;
      case Phase::input: {
        const double u = t - input.t_start;
        v = b.input_dc + b.input_amplitude * std::sin(kTwoPi * b.f_input * u);
        break;
      }
      case Phase::storage:
        v = 0.0;
        break;
      case Phase::readout: {
        const double u = t - readout.t_start;
        v = b.readout_dc + b.retrieved_amplitude * std::exp(-u / c.retrieval_decay_time) *
                               std::sin(b.readout_phase + kTwoPi * b.f_retrieved * u);
        break;
      }
    }
    trace.samples[i] = v;
  }

  if (c.trace_noise_sigma > 0.0) {
    std::mt19937_64 rng(c.rng_seed);
    std::normal_distribution<double> noise(0.0, c.trace_noise_sigma);
    for (auto& v : trace.samples) v += noise(rng);
  }
  return trace;
}

}  // namespace lss
