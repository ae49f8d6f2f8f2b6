#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "lss/model/experiment_config.hpp"

namespace lss {

enum class StudyKind { dark_resonance, spectroscopy, control_sweep, signal_sweep, fit_only };
enum class Averaging { traces, fits };  // average traces then fit, or fit each then average

std::string_view to_string(StudyKind k);
std::string_view to_string(Averaging a);
StudyKind parse_study_kind(std::string_view s);
Averaging parse_averaging(std::string_view s);

// Name of the swept quantity: delta_r_hz, control_intensity or
// signal_intensity (both in units of I_sat).
std::string_view swept_variable(StudyKind k);

struct StudyPlan {
  StudyKind kind = StudyKind::spectroscopy;
  ExperimentConfig base;
  std::vector<double> grid;          // values of swept_variable(kind)
  std::vector<double> delta_r_grid;  // inner spectroscopy grid of the sweeps, Hz
  std::size_t repetitions = 10;
  Averaging averaging = Averaging::traces;
  double guard = 2e-6;  // s skipped after each switching edge
  std::filesystem::path output_dir;
  std::uint64_t seed_base = 1;  // mirrors base.rng_seed
  unsigned jobs = 1;
  bool write_traces = true;

  // Throws ConfigError when a grid is empty or not strictly increasing, or
  // repetitions is 0.
  void validate() const;
};

// Plan with the default grids for `kind` around the configuration's drive.
StudyPlan default_plan(StudyKind kind, const ExperimentConfig& base = default_config());

std::vector<double> default_grid(StudyKind kind, const ExperimentConfig& base);
std::vector<double> default_delta_r_grid();

// base xor splitmix64(index); nested for repetitions inside points.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index);

}  // namespace lss
