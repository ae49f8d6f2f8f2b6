#pragma once

#include <span>

#include "lss/model/experiment_config.hpp"

namespace lss {

// Bisects kappa (log scale) until the dark-resonance FWHM over `grid` equals
// target_fwhm_hz to within rel_tol. The light-shift model is left untouched.
// Throws NumericalError when the target cannot be bracketed.
double calibrate_kappa(const ExperimentConfig& base, double target_fwhm_hz,
                       std::span<const double> grid, double rel_tol = 1e-6);

// FWHM (Hz) of the dark resonance of `config` over `grid`; NaN if unresolved.
double window_fwhm(const ExperimentConfig& config, std::span<const double> grid);

}  // namespace lss
