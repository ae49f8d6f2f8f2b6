#pragma once

#include <cstddef>
#include <vector>

#include "lss/atom/density_matrix.hpp"
#include "lss/model/experiment_config.hpp"
#include "lss/model/pulse_sequence.hpp"

namespace lss {

struct EvolveOptions {
  double dt_max = 0.0;  // <= 0 selects 1 / (50 * largest frequency scale)
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  std::size_t record_stride = 1;  // keep every n-th accepted step
};

struct Trajectory {
  std::vector<DensityMatrix> states;  // initial state, recorded steps, segment ends
  std::size_t accepted_steps = 0;
  std::size_t rejected_steps = 0;
  double dt_max = 0.0;
};

// Integrates the master equation through the sequence with piecewise-constant
// fields. Control uses the readout intensity during the readout phase. No
// renormalization is applied; the invariants are left to be checked.
// Throws IntegrationError on step-size underflow.
Trajectory evolve(const DensityMatrix& rho0, const ExperimentConfig& config,
                  const PulseSequence& sequence, double dt_max);
Trajectory evolve(const DensityMatrix& rho0, const ExperimentConfig& config,
                  const PulseSequence& sequence, const EvolveOptions& options);

// Largest frequency scale (rad/s) over the segments of the sequence.
double max_rate_scale(const ExperimentConfig& config, const PulseSequence& sequence);

}  // namespace lss
