#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "lss/model/level_scheme.hpp"

namespace lss {

enum class FieldRole { control, signal };

std::string_view to_string(FieldRole r);

struct FieldConfig {
  FieldRole role = FieldRole::control;
  double intensity = 0.0;            // I / I_sat
  double power = 0.0;                // W, informational
  double rabi_frequency = 0.0;       // rad/s, derived from intensity
  double one_photon_detuning = 0.0;  // rad/s
  Polarization polarization = Polarization::sigma_minus;
  double angle_alpha = 0.0;  // rad, relative to the control beam

  FieldConfig switched_off() const {
    FieldConfig f = *this;
    f.intensity = 0.0;
    f.rabi_frequency = 0.0;
    return f;
  }

  std::vector<std::string> validate() const;
};

// Omega = sqrt(kappa * intensity) * |cg|. Throws std::domain_error for
// negative intensity.
double rabi_from_intensity(double intensity, double cg, double kappa);

// Flat-top beam estimate: power over the beam cross section, in units of
// the saturation intensity.
double intensity_from_power(double power_w, double beam_diameter_m,
                            double saturation_intensity_w_m2);

// Ground state a field drives from, given its polarization. sigma+ raises m_F
// and so connects |g-> (m_F=-2) to the m_F=-1 excited state; sigma- connects
// |g+> (m_F=0).
constexpr Ground addressed_ground(Polarization p) {
  return p == Polarization::sigma_plus ? Ground::minus : Ground::plus;
}

}  // namespace lss
