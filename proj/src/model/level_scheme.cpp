#include "lss/model/level_scheme.hpp"

#include <cmath>

#include "lss/errors.hpp"
#include "lss/model/field.hpp"

namespace lss {

std::string_view to_string(Ground g) { return g == Ground::minus ? "minus" : "plus"; }

std::string_view to_string(Excited e) { return e == Excited::primary ? "primary" : "secondary"; }

std::string_view to_string(Polarization p) {
  return p == Polarization::sigma_plus ? "sigma+" : "sigma-";
}

Ground parse_ground(std::string_view s) {
  if (s == "minus") return Ground::minus;
  if (s == "plus") return Ground::plus;
  throw ConfigError("unknown ground state '" + std::string(s) + "' (expected minus|plus)");
}

Excited parse_excited(std::string_view s) {
  if (s == "primary") return Excited::primary;
  if (s == "secondary") return Excited::secondary;
  throw ConfigError("unknown excited state '" + std::string(s) +
                    "' (expected primary|secondary)");
}

Polarization parse_polarization(std::string_view s) {
  if (s == "sigma+") return Polarization::sigma_plus;
  if (s == "sigma-") return Polarization::sigma_minus;
  throw ConfigError("unknown polarization '" + std::string(s) + "' (expected sigma+|sigma-)");
}

double LevelScheme::weight(Ground g, Excited e, Polarization p) const {
  for (const auto& w : clebsch_weights) {
    if (w.ground == g && w.excited == e && w.polarization == p) return w.amplitude;
  }
  return 0.0;
}

std::vector<std::string> LevelScheme::validate() const {
  std::vector<std::string> warnings;
  if (!(gamma_e >= 0.0) || !(gamma_gg >= 0.0) || !std::isfinite(gamma_e) ||
      !std::isfinite(gamma_gg)) {
    throw ConfigError("level_scheme: decay rates must be finite and non-negative");
  }
  if (gamma_e > 0.0 && gamma_gg > 0.1 * gamma_e) {
    warnings.push_back("level_scheme: gamma_gg is not much smaller than gamma_e");
  }
  for (const auto& w : clebsch_weights) {
    if (!std::isfinite(w.amplitude)) {
      throw ConfigError("level_scheme: non-finite Clebsch-Gordan weight");
    }
    if (w.excited == Excited::secondary && !second_excited) {
      throw ConfigError("level_scheme: weight refers to an undefined second excited level");
    }
  }
  for (auto p : {Polarization::sigma_plus, Polarization::sigma_minus}) {
    if (weight(addressed_ground(p), Excited::primary, p) == 0.0) {
      throw ConfigError("level_scheme: no nonzero weight for the " + std::string(to_string(p)) +
                        " leg to the primary excited level");
    }
  }
  if (four_level_dynamics && !second_excited) {
    throw ConfigError("level_scheme: four_level_dynamics requires second_excited");
  }
  if (second_excited && !std::isfinite(second_excited->hyperfine_offset)) {
    throw ConfigError("level_scheme: non-finite hyperfine_offset");
  }
  return warnings;
}

}  // namespace lss
