#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace lss {

enum class Ground { minus, plus };
enum class Excited { primary, secondary };
enum class Polarization { sigma_plus, sigma_minus };

// Basis ordering of every density matrix and Hamiltonian in the library.
namespace basis {
inline constexpr std::size_t kGroundMinus = 0;
inline constexpr std::size_t kGroundPlus = 1;
inline constexpr std::size_t kExcited = 2;
inline constexpr std::size_t kSecondExcited = 3;
}  // namespace basis

constexpr std::size_t index_of(Ground g) {
  return g == Ground::minus ? basis::kGroundMinus : basis::kGroundPlus;
}
constexpr std::size_t index_of(Excited e) {
  return e == Excited::primary ? basis::kExcited : basis::kSecondExcited;
}

std::string_view to_string(Ground g);
std::string_view to_string(Excited e);
std::string_view to_string(Polarization p);
Ground parse_ground(std::string_view s);
Excited parse_excited(std::string_view s);
Polarization parse_polarization(std::string_view s);

// Relative dipole amplitude of one (ground, excited, polarization) transition.
struct TransitionWeight {
  Ground ground = Ground::minus;
  Excited excited = Excited::primary;
  Polarization polarization = Polarization::sigma_plus;
  double amplitude = 0.0;
};

struct SecondExcitedLevel {
  std::string label = "|5P1/2,F'=2,mF=-1>";
  double hyperfine_offset = 0.0;  // Hz above the primary excited level
};

enum class DecayBranching { equal, clebsch };

struct LevelScheme {
  std::string ground_minus_label = "|F=2,mF=-2>";
  std::string ground_plus_label = "|F=2,mF=0>";
  std::string excited_label = "|F'=1,mF=-1>";
  std::optional<SecondExcitedLevel> second_excited;

  double gamma_e = 0.0;   // excited-state population decay, rad/s
  double gamma_gg = 0.0;  // ground-state decoherence, rad/s
  DecayBranching branching = DecayBranching::equal;

  std::vector<TransitionWeight> clebsch_weights;

  // Include the second excited level in the master-equation dynamics. When
  // false it only enters the light-shift model.
  bool four_level_dynamics = false;

  std::size_t dimension() const {
    return (four_level_dynamics && second_excited) ? 4 : 3;
  }

  // Amplitude for the given transition, 0 when not listed.
  double weight(Ground g, Excited e, Polarization p) const;

  // Throws ConfigError on hard violations, returns soft warnings.
  std::vector<std::string> validate() const;
};

}  // namespace lss
