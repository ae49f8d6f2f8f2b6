#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "lss/atom/density_matrix.hpp"
#include "lss/model/experiment_config.hpp"

namespace lss {

struct SpectrumPoint {
  double delta_r = 0.0;       // Hz
  double transmission = 0.0;  // in [0, 1]
  // Gamma_e * Im(rho_{e,g_s}) / Omega_S; 1 for a resonant bare two-level atom
  // in the weak-signal limit.
  double absorption_proxy = 0.0;
};

double absorption_proxy(const DensityMatrix& rho, const ExperimentConfig& config);

// Steady-state transmission exp(-optical_depth * proxy) over a sorted,
// nonempty grid of two-photon detunings (Hz).
std::vector<SpectrumPoint> transmission_spectrum(const ExperimentConfig& config,
                                                 std::span<const double> delta_r_grid);

struct WindowShape {
  std::size_t peak_index = 0;
  double peak_delta_r = 0.0;
  double peak_transmission = 0.0;
  double floor_transmission = 0.0;  // minimum over the grid
  double fwhm = 0.0;                // Hz, NaN when a half-maximum edge is off the grid
  bool resolved = false;
};

// Full width of the transmission peak at half height between peak and floor,
// with linear interpolation of the crossings.
WindowShape analyze_window(std::span<const SpectrumPoint> spectrum);

void write_spectrum_csv(std::ostream& out, std::span<const SpectrumPoint> spectrum);

}  // namespace lss
