#pragma once

#include <string>
#include <vector>

namespace lss {

// One off-resonant coupling of the control field that shifts the ground-state
// splitting. Positive detuning means the addressed level lies above the laser
// frequency; with positive weight it raises the |g+>-|g-> splitting.
struct LightShiftCoupling {
  std::string label;
  double detuning = 0.0;  // rad/s
  double weight = 0.0;    // effective squared Clebsch-Gordan factor
};

// Calibrated (not ab initio) differential light-shift model. The shift is
// exactly linear in the control intensity by construction.
struct LightShiftModel {
  std::vector<LightShiftCoupling> couplings;
  double linewidth = 0.0;  // rad/s
  double kappa = 0.0;      // (rad/s)^2 per unit I/I_sat

  // Hz per unit I/I_sat.
  double slope_per_intensity() const;
};

// Differential ac Stark shift in Hz produced by a control field at the given
// intensity (I/I_sat). Throws std::domain_error for negative intensity.
double ac_stark_shift(double intensity_c, const LightShiftModel& model);

// Returns a copy with all coupling weights scaled so that the shift at
// `intensity` equals `target_shift_hz`.
LightShiftModel calibrate_light_shift(const LightShiftModel& model, double intensity,
                                      double target_shift_hz);

}  // namespace lss
