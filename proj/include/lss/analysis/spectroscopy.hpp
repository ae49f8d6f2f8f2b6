#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "lss/analysis/beat_fit.hpp"
#include "lss/analysis/line_fit.hpp"

namespace lss {

struct SpectroscopyPoint {
  double delta_r = 0.0;  // Hz
  Estimate f_input;
  Estimate f_retrieved;
  bool included = true;
  std::string note;  // reason for exclusion
};

struct SpectroscopyResult {
  std::vector<SpectroscopyPoint> points;
  LineFit input_fit;
  LineFit retrieved_fit;
  // Crossing of the two lines, i.e. the light shift. Empty when the slopes
  // are not separated by more than 3 combined standard errors.
  std::optional<Intersection> delta_f_ac;
  std::string delta_f_ac_note;

  std::size_t n_included() const;
};

// Fits both lines through the included points and intersects them. Throws
// NumericalError when fewer than 3 points survive.
SpectroscopyResult analyze_spectroscopy(std::vector<SpectroscopyPoint> points);

// One row per fitted window: window_id, f_b_hz, f_b_err_hz, amplitude,
// tau_e_s, rms_residual, converged.
struct FitRow {
  std::string window_id;
  BeatFitResult fit;
};
void write_fits_csv(std::ostream& out, const std::vector<FitRow>& rows);

}  // namespace lss
