#include "lss/atom/light_shift.hpp"

#include <cmath>
#include <stdexcept>

#include "lss/model/constants.hpp"

namespace lss {

double LightShiftModel::slope_per_intensity() const {
  double s = 0.0;
  const double g2 = linewidth * linewidth;
  for (const auto& c : couplings) {
    s += c.weight * kappa * c.detuning / (4.0 * c.detuning * c.detuning + g2);
  }
  return s / constants::kTwoPi;
}

double ac_stark_shift(double intensity_c, const LightShiftModel& model) {
  if (intensity_c < 0.0) throw std::domain_error("ac_stark_shift: negative intensity");
  return model.slope_per_intensity() * intensity_c;
}

LightShiftModel calibrate_light_shift(const LightShiftModel& model, double intensity,
                                      double target_shift_hz) {
  const double current = ac_stark_shift(intensity, model);
  if (current == 0.0) {
    throw std::domain_error("calibrate_light_shift: model yields no shift to scale");
  }
  const double factor = target_shift_hz / current;
  if (factor < 0.0) {
    throw std::domain_error("calibrate_light_shift: target has the opposite sign of the model");
  }
  LightShiftModel out = model;
  for (auto& c : out.couplings) c.weight *= factor;
  return out;
}

}  // namespace lss
