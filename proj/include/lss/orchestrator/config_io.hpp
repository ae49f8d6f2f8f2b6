#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "lss/orchestrator/study_plan.hpp"

namespace lss {

// YAML configuration. Every ExperimentConfig field has a key; missing keys
// keep the calibrated defaults, unknown keys are a ConfigError. An optional
// top-level `study` section fills the StudyPlan. Rabi frequencies are always
// recomputed from intensity and kappa.
//
// `kind` overrides study.kind (the CLI subcommand decides). Default grids are
// derived from the loaded configuration.
StudyPlan parse_plan(std::string_view text, const std::string& source,
                     std::optional<StudyKind> kind = std::nullopt);

// Throws IoError when the file cannot be read.
StudyPlan load_plan(const std::filesystem::path& file, std::optional<StudyKind> kind = std::nullopt);

ExperimentConfig parse_config(std::string_view text, const std::string& source);

// Complete snapshot, every number written in shortest round-trip form so that
// parse_plan(emit_plan(p)) reproduces p exactly (output_dir, jobs and
// write_traces are run options and are not written).
std::string emit_plan(const StudyPlan& plan);
std::string emit_config(const ExperimentConfig& config);

}  // namespace lss
