#include "lss/model/experiment_config.hpp"

#include <cmath>

#include "lss/errors.hpp"
#include "lss/model/constants.hpp"

namespace lss {

namespace {

// Frozen outputs of the calibration routines (see atom/calibration.hpp):
// kappa reproduces a 20 kHz dark-resonance window at the default drive, the
// light-shift weight reproduces a 7 kHz shift at the default control intensity.
constexpr double kDefaultKappa = 3.0969659361253271e12;  // 401-point grid over +-100 kHz
constexpr double kDefaultLightShiftWeight = 27.716930229702154;

constexpr double kBeamDiameter = 0.9e-3;  // m
constexpr double kControlPower = 300e-6;  // W
constexpr double kSignalPower = 100e-6;   // W

}  // namespace

double primary_leg_weight(const LevelScheme& scheme, const FieldConfig& field) {
  return scheme.weight(addressed_ground(field.polarization), Excited::primary, field.polarization);
}

double ExperimentConfig::control_rabi(double intensity) const {
  return rabi_from_intensity(intensity, primary_leg_weight(level_scheme, control), kappa);
}

double ExperimentConfig::signal_rabi(double intensity) const {
  return rabi_from_intensity(intensity, primary_leg_weight(level_scheme, signal), kappa);
}

FieldConfig ExperimentConfig::readout_control() const {
  FieldConfig f = control;
  f.intensity = readout_control_intensity();
  f.rabi_frequency = readout_rabi();
  return f;
}

void ExperimentConfig::refresh_rabi_frequencies() {
  control.rabi_frequency = control_rabi(control.intensity);
  signal.rabi_frequency = signal_rabi(signal.intensity);
}

ExperimentConfig ExperimentConfig::with_control_intensity(double intensity) const {
  ExperimentConfig c = *this;
  c.control.intensity = intensity;
  c.refresh_rabi_frequencies();
  return c;
}

ExperimentConfig ExperimentConfig::with_readout_intensity(double intensity) const {
  ExperimentConfig c = *this;
  c.readout_intensity = intensity;
  return c;
}

ExperimentConfig ExperimentConfig::with_signal_intensity(double intensity) const {
  ExperimentConfig c = *this;
  c.signal.intensity = intensity;
  c.refresh_rabi_frequencies();
  return c;
}

ExperimentConfig ExperimentConfig::with_delta_r(double delta_r_hz) const {
  ExperimentConfig c = *this;
  c.delta_r = delta_r_hz;
  return c;
}

ExperimentConfig ExperimentConfig::with_kappa(double k) const {
  ExperimentConfig c = *this;
  c.kappa = k;
  c.refresh_rabi_frequencies();
  return c;
}

PulseSequence ExperimentConfig::pulse_sequence() const {
  return PulseSequence::standard(timing.preparation, timing.input, timing.storage, timing.readout);
}

ExperimentConfig default_config() {
  using namespace constants;
  ExperimentConfig c;

  auto& ls = c.level_scheme;
  ls.second_excited = SecondExcitedLevel{"|5P1/2,F'=2,mF=-1>", kD1ExcitedHyperfineSplitting};
  ls.gamma_e = kD1NaturalLinewidth;
  ls.gamma_gg = kTwoPi * 1.0e3;
  // Squared amplitudes are the m_F Clebsch-Gordan factors times the F=2 -> F'
  // relative strength of 1/2.
  ls.clebsch_weights = {
      {Ground::minus, Excited::primary, Polarization::sigma_plus, std::sqrt(0.3)},
      {Ground::plus, Excited::primary, Polarization::sigma_minus, std::sqrt(0.05)},
      {Ground::minus, Excited::secondary, Polarization::sigma_plus, std::sqrt(1.0 / 6.0)},
      {Ground::plus, Excited::secondary, Polarization::sigma_minus, std::sqrt(0.25)},
  };

  c.kappa = kDefaultKappa;

  c.control.role = FieldRole::control;
  c.control.power = kControlPower;
  c.control.intensity = intensity_from_power(kControlPower, kBeamDiameter, kD1SaturationIntensity);
  c.control.polarization = Polarization::sigma_minus;

  c.signal.role = FieldRole::signal;
  c.signal.power = kSignalPower;
  c.signal.intensity = intensity_from_power(kSignalPower, kBeamDiameter, kD1SaturationIntensity);
  c.signal.polarization = Polarization::sigma_plus;

  c.refresh_rabi_frequencies();

  c.magnetic.b0 = 0.49;
  c.delta_r = 0.0;
  c.optical_depth = 2.0;

  c.light_shift.linewidth = kD1NaturalLinewidth;
  c.light_shift.kappa = kDefaultKappa;
  c.light_shift.couplings = {
      {"5P1/2 F'=2", kTwoPi * kD1ExcitedHyperfineSplitting, kDefaultLightShiftWeight}};

  c.sample_rate = 10e6;
  c.trace_noise_sigma = 0.05;
  c.control_leak_fraction = 0.02;
  c.storage_efficiency = 0.2;
  c.retrieval_decay_time = 10e-6;
  c.collective_coupling = kTwoPi * 500e6;
  c.rng_seed = 1;
  return c;
}

std::vector<std::string> validate(const ExperimentConfig& c) {
  std::vector<std::string> warnings = c.level_scheme.validate();
  for (const auto* f : {&c.control, &c.signal}) {
    auto w = f->validate();
    warnings.insert(warnings.end(), w.begin(), w.end());
  }
  if (c.control.role != FieldRole::control || c.signal.role != FieldRole::signal) {
    throw ConfigError("field roles are inconsistent");
  }
  if (c.control.polarization == c.signal.polarization) {
    throw ConfigError("control and signal share a polarization and drive the same leg");
  }
  if (c.readout_intensity && !(*c.readout_intensity >= 0.0)) {
    throw ConfigError("readout_intensity must be >= 0");
  }
  auto finite_nonneg = [](double v) { return std::isfinite(v) && v >= 0.0; };
  if (!finite_nonneg(c.kappa)) throw ConfigError("kappa must be finite and >= 0");
  if (!finite_nonneg(c.optical_depth)) throw ConfigError("optical_depth must be finite and >= 0");
  if (!std::isfinite(c.magnetic.b0) || !std::isfinite(c.magnetic.g_f) ||
      !std::isfinite(c.magnetic.bohr_magneton_over_h)) {
    throw ConfigError("magnetic: non-finite parameter");
  }
  if (!std::isfinite(c.delta_r)) throw ConfigError("delta_r must be finite");
  if (!(c.control_leak_fraction >= 0.0 && c.control_leak_fraction <= 1.0)) {
    throw ConfigError("control_leak_fraction must lie in [0, 1]");
  }
  if (!(c.storage_efficiency >= 0.0 && c.storage_efficiency <= 1.0)) {
    throw ConfigError("storage_efficiency must lie in [0, 1]");
  }
  if (!finite_nonneg(c.trace_noise_sigma)) throw ConfigError("trace_noise_sigma must be >= 0");
  if (!(c.retrieval_decay_time > 0.0)) throw ConfigError("retrieval_decay_time must be > 0");
  if (!finite_nonneg(c.collective_coupling)) {
    throw ConfigError("collective_coupling must be finite and >= 0");
  }
  const double nyquist = 4.0 * (c.magnetic.zeeman_splitting() + std::abs(c.delta_r));
  if (!(c.sample_rate > nyquist)) {
    throw ConfigError("sample_rate " + std::to_string(c.sample_rate) +
                      " S/s violates the 4x Nyquist margin (" + std::to_string(nyquist) + " S/s)");
  }
  const auto& t = c.timing;
  if (!(t.preparation > 0.0 && t.input > 0.0 && t.storage > 0.0 && t.readout > 0.0)) {
    throw ConfigError("sequence durations must all be > 0");
  }
  for (const auto& cp : c.light_shift.couplings) {
    if (!std::isfinite(cp.detuning) || !std::isfinite(cp.weight) || cp.weight < 0.0) {
      throw ConfigError("light_shift coupling '" + cp.label + "' is invalid");
    }
  }
  if (!finite_nonneg(c.light_shift.linewidth) || !finite_nonneg(c.light_shift.kappa)) {
    throw ConfigError("light_shift linewidth and kappa must be finite and >= 0");
  }
  return warnings;
}

}  // namespace lss
