#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "lss/analysis/spectroscopy.hpp"
#include "lss/atom/spectrum.hpp"
#include "lss/orchestrator/study_plan.hpp"

namespace lss {

// What a run leaves behind. The CSV members hold the exact bytes written to
// summary.csv and points.csv; they depend only on the plan.
struct RunRecord {
  std::string plan_snapshot;  // plan.cfg contents
  std::vector<std::string> trace_files;  // relative to the output directory
  std::string summary_csv;
  std::string points_csv;
  std::vector<std::string> warnings;
  std::string tool_version;
  std::string started_utc;
  double elapsed_s = 0.0;
};

struct SpectroscopyRun {
  SpectroscopyResult result;
  std::vector<std::vector<FitRow>> fits;  // per point
  std::vector<std::string> warnings;
  RunRecord record;
};

struct SweepPoint {
  double value = 0.0;  // swept intensity, I/I_sat
  std::optional<Intersection> delta_f_ac;
  bool included = false;
  std::string note;
};

struct SweepRun {
  std::vector<SweepPoint> points;
  std::optional<LineFit> fit;             // delta_f_ac against the swept intensity
  std::optional<LineFit> restricted_fit;  // signal sweep: I_S <= I_C only
  double model_slope = 0.0;  // Hz per I/I_sat from the light-shift model
  RunRecord record;
};

struct DarkResonanceRun {
  std::vector<SpectrumPoint> spectrum;
  WindowShape shape;
  RunRecord record;
};

// Each run writes into plan.output_dir unless it is empty, in which case it
// stays in memory. A run over persisted traces (reanalyze) takes its samples
// from `trace_dir` instead of simulating them.
SpectroscopyRun run_spectroscopy(const StudyPlan& plan);
SweepRun run_control_sweep(const StudyPlan& plan);
SweepRun run_signal_sweep(const StudyPlan& plan);
DarkResonanceRun run_dark_resonance(const StudyPlan& plan);

// Dispatches on plan.kind.
RunRecord run_study(const StudyPlan& plan);

// Re-analyses a finished run from its plan.cfg and stored traces, writing the
// outputs to out_dir (in memory when empty). Throws IoError when traces were
// not persisted.
RunRecord reanalyze(const std::filesystem::path& run_dir, const std::filesystem::path& out_dir,
                    unsigned jobs = 1);

struct NamedWindow {
  std::string id;
  FitWindow window;
  bool envelope = false;
};

// Input and readout windows of a sequence with `guard` seconds dropped after
// each switching edge.
std::vector<NamedWindow> standard_windows(const PulseSequence& sequence, double guard);

// Fits every window of an externally recorded trace.
std::vector<FitRow> fit_trace(const PhotodiodeTrace& trace, const std::vector<NamedWindow>& windows);

// Runs f(0..n-1) on up to `jobs` threads. The first exception by index is
// rethrown after all workers finish.
void parallel_for(std::size_t n, unsigned jobs, const std::function<void(std::size_t)>& f);

}  // namespace lss
