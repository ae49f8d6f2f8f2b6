#include "lss/orchestrator/study_plan.hpp"

#include "lss/errors.hpp"
#include "lss/util/grid.hpp"

namespace lss {

std::string_view to_string(StudyKind k) {
  switch (k) {
    case StudyKind::dark_resonance: return "dark_resonance";
    case StudyKind::spectroscopy: return "spectroscopy";
    case StudyKind::control_sweep: return "control_sweep";
    case StudyKind::signal_sweep: return "signal_sweep";
    case StudyKind::fit_only: return "fit_only";
  }
  return "?";
}

std::string_view to_string(Averaging a) { return a == Averaging::traces ? "traces" : "fits"; }

StudyKind parse_study_kind(std::string_view s) {
  for (auto k : {StudyKind::dark_resonance, StudyKind::spectroscopy, StudyKind::control_sweep,
                 StudyKind::signal_sweep, StudyKind::fit_only}) {
    if (s == to_string(k)) return k;
  }
  throw ConfigError("unknown study kind '" + std::string(s) + "'");
}

Averaging parse_averaging(std::string_view s) {
  if (s == "traces") return Averaging::traces;
  if (s == "fits") return Averaging::fits;
  throw ConfigError("averaging must be 'traces' or 'fits', got '" + std::string(s) + "'");
}

std::string_view swept_variable(StudyKind k) {
  switch (k) {
    case StudyKind::control_sweep: return "control_intensity";
    case StudyKind::signal_sweep: return "signal_intensity";
    default: return "delta_r_hz";
  }
}

void StudyPlan::validate() const {
  if (kind != StudyKind::fit_only) {
    if (grid.empty()) throw ConfigError("study grid is empty");
    if (!strictly_monotone(grid)) throw ConfigError("study grid must be strictly increasing");
  }
  const bool sweep = kind == StudyKind::control_sweep || kind == StudyKind::signal_sweep;
  if (sweep) {
    if (delta_r_grid.empty()) throw ConfigError("study delta_r_grid is empty");
    if (!strictly_monotone(delta_r_grid)) {
      throw ConfigError("study delta_r_grid must be strictly increasing");
    }
    for (double v : grid) {
      if (!(v > 0.0)) throw ConfigError("swept intensities must be positive");
    }
  }
  if (repetitions < 1) throw ConfigError("repetitions must be >= 1");
  if (!(guard >= 0.0)) throw ConfigError("guard must be >= 0");
  if (jobs < 1) throw ConfigError("jobs must be >= 1");
}

std::vector<double> default_delta_r_grid() { return symmetric_grid(15e3, 9); }

std::vector<double> default_grid(StudyKind kind, const ExperimentConfig& base) {
  const double i_c = base.control.intensity;
  switch (kind) {
    case StudyKind::dark_resonance: return symmetric_grid(100e3, 401);
    case StudyKind::spectroscopy: return default_delta_r_grid();
    case StudyKind::control_sweep: return linspace(0.5 * i_c, 2.0 * i_c, 6);
    case StudyKind::signal_sweep: return linspace(0.1 * i_c, 3.0 * i_c, 8);
    case StudyKind::fit_only: return {};
  }
  return {};
}

StudyPlan default_plan(StudyKind kind, const ExperimentConfig& base) {
  StudyPlan p;
  p.kind = kind;
  p.base = base;
  p.grid = default_grid(kind, base);
  p.delta_r_grid = default_delta_r_grid();
  p.seed_base = base.rng_seed;
  return p;
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
  std::uint64_t z = index + 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return base ^ (z ^ (z >> 31));
}

}  // namespace lss
