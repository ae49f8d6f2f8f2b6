#include "lss/atom/hamiltonian.hpp"

#include <string>

#include "lss/errors.hpp"
#include "lss/model/constants.hpp"

namespace lss {

LegAssignment resolve_legs(const FieldConfig& control, const FieldConfig& signal) {
  if (control.role != FieldRole::control || signal.role != FieldRole::signal) {
    throw ConfigError("build_hamiltonian: field roles swapped");
  }
  if (control.polarization == signal.polarization) {
    throw ConfigError("build_hamiltonian: control and signal are both " +
                      std::string(to_string(control.polarization)) + " and drive the same leg");
  }
  LegAssignment legs;
  legs.control_ground = addressed_ground(control.polarization);
  legs.signal_ground = addressed_ground(signal.polarization);
  legs.standard = control.polarization == Polarization::sigma_minus;
  return legs;
}

Eigen::MatrixXcd build_hamiltonian(const LevelScheme& scheme, const FieldConfig& control,
                                   const FieldConfig& signal, double delta_r) {
  const LegAssignment legs = resolve_legs(control, signal);
  const auto n = static_cast<Eigen::Index>(scheme.dimension());
  const auto gc = static_cast<Eigen::Index>(index_of(legs.control_ground));
  const auto gs = static_cast<Eigen::Index>(index_of(legs.signal_ground));
  const auto e = static_cast<Eigen::Index>(basis::kExcited);

  const double two_photon = constants::kTwoPi * delta_r;
  const double delta_s = control.one_photon_detuning + two_photon;

  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(n, n);
  h(gc, gc) = -two_photon;
  h(e, e) = -delta_s;
  h(e, gc) = h(gc, e) = -0.5 * control.rabi_frequency;
  h(e, gs) = h(gs, e) = -0.5 * signal.rabi_frequency;

  if (n == 4) {
    const auto e2 = static_cast<Eigen::Index>(basis::kSecondExcited);
    h(e2, e2) = -delta_s + constants::kTwoPi * scheme.second_excited->hyperfine_offset;
    auto ratio = [&](Ground g, Polarization p) {
      const double w1 = scheme.weight(g, Excited::primary, p);
      if (w1 == 0.0) throw ConfigError("build_hamiltonian: missing primary leg weight");
      return scheme.weight(g, Excited::secondary, p) / w1;
    };
    const double omega_c2 =
        control.rabi_frequency * ratio(legs.control_ground, control.polarization);
    const double omega_s2 = signal.rabi_frequency * ratio(legs.signal_ground, signal.polarization);
    h(e2, gc) = h(gc, e2) = -0.5 * omega_c2;
    h(e2, gs) = h(gs, e2) = -0.5 * omega_s2;
  }
  return h;
}

}  // namespace lss
