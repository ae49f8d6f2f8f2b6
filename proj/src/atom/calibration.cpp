#include "lss/atom/calibration.hpp"

#include <cmath>

#include "lss/atom/spectrum.hpp"
#include "lss/errors.hpp"

namespace lss {

double window_fwhm(const ExperimentConfig& config, std::span<const double> grid) {
  const auto spectrum = transmission_spectrum(config, grid);
  return analyze_window(spectrum).fwhm;
}

double calibrate_kappa(const ExperimentConfig& base, double target_fwhm_hz,
                       std::span<const double> grid, double rel_tol) {
  auto width = [&](double log_kappa) {
    const double w = window_fwhm(base.with_kappa(std::exp(log_kappa)), grid);
    return std::isnan(w) ? INFINITY : w;
  };
  double lo = std::log(base.kappa) - 8.0;
  double hi = std::log(base.kappa) + 8.0;
  if (!(width(lo) < target_fwhm_hz) || !(width(hi) > target_fwhm_hz)) {
    throw NumericalError("calibrate_kappa: target FWHM not bracketed");
  }
  for (int it = 0; it < 200 && hi - lo > rel_tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    (width(mid) < target_fwhm_hz ? lo : hi) = mid;
  }
  return std::exp(0.5 * (lo + hi));
}

}  // namespace lss
