#pragma once

#include "lss/atom/density_matrix.hpp"
#include "lss/atom/lindblad.hpp"
#include "lss/model/experiment_config.hpp"

namespace lss {

// Stationary state of the generator with both fields on. Throws
// SteadyStateError when no decay channel exists or the stationary space is
// degenerate; the message names the zero modes.
DensityMatrix steady_state(const LindbladGenerator& generator);
DensityMatrix steady_state(const LevelScheme& scheme, const FieldConfig& control,
                           const FieldConfig& signal, double delta_r);
DensityMatrix steady_state(const ExperimentConfig& config);

}  // namespace lss
