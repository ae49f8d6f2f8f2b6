#include "lss/model/field.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "lss/errors.hpp"
#include "lss/model/magnetic.hpp"

namespace lss {

std::string_view to_string(FieldRole r) { return r == FieldRole::control ? "control" : "signal"; }

std::vector<std::string> FieldConfig::validate() const {
  const std::string name(to_string(role));
  if (!(intensity >= 0.0) || !std::isfinite(intensity)) {
    throw ConfigError(name + ": intensity must be finite and >= 0");
  }
  if (!(rabi_frequency >= 0.0) || !std::isfinite(rabi_frequency)) {
    throw ConfigError(name + ": rabi_frequency must be finite and >= 0");
  }
  if (!std::isfinite(one_photon_detuning) || !std::isfinite(angle_alpha) || !std::isfinite(power)) {
    throw ConfigError(name + ": non-finite field parameter");
  }
  std::vector<std::string> warnings;
  const auto expected =
      role == FieldRole::control ? Polarization::sigma_minus : Polarization::sigma_plus;
  if (polarization != expected) {
    warnings.push_back(name + ": non-default polarization " + std::string(to_string(polarization)));
  }
  return warnings;
}

double rabi_from_intensity(double intensity, double cg, double kappa) {
  if (intensity < 0.0) throw std::domain_error("rabi_from_intensity: negative intensity");
  return std::sqrt(kappa * intensity) * std::abs(cg);
}

double intensity_from_power(double power_w, double beam_diameter_m,
                            double saturation_intensity_w_m2) {
  const double radius = 0.5 * beam_diameter_m;
  return power_w / (std::numbers::pi * radius * radius) / saturation_intensity_w_m2;
}

double two_photon_detuning(double omega_s, double omega_c, const MagneticEnvironment& magnetic) {
  return (omega_s - omega_c) / (2.0 * std::numbers::pi) - magnetic.zeeman_splitting();
}

}  // namespace lss
