#include "lss/orchestrator/runner.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <ctime>
#include <exception>
#include <fstream>
#include <iomanip>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "lss/atom/calibration.hpp"
#include "lss/errors.hpp"
#include "lss/orchestrator/config_io.hpp"
#include "lss/storage/synthesis.hpp"
#include "lss/storage/trace_io.hpp"
#include "lss/util/format.hpp"
#include "lss/util/grid.hpp"

namespace lss {

namespace fs = std::filesystem;

void parallel_for(std::size_t n, unsigned jobs, const std::function<void(std::size_t)>& f) {
  const std::size_t workers = std::min<std::size_t>(std::max(1u, jobs), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          f(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

std::vector<NamedWindow> standard_windows(const PulseSequence& seq, double guard) {
  std::vector<NamedWindow> out;
  const auto& in = seq.phase(Phase::input);
  const auto& rd = seq.phase(Phase::readout);
  if (!(in.t_start + guard < in.t_end) || !(rd.t_start + guard < rd.t_end)) {
    throw ConfigError("guard interval leaves no samples in the input or readout epoch");
  }
  out.push_back({"input", {in.t_start + guard, in.t_end}, false});
  out.push_back({"readout", {rd.t_start + guard, rd.t_end}, true});
  return out;
}

std::vector<FitRow> fit_trace(const PhotodiodeTrace& trace, const std::vector<NamedWindow>& windows) {
  std::vector<FitRow> rows;
  for (const auto& w : windows) {
    BeatFitOptions opt;
    opt.envelope = w.envelope;
    try {
      rows.push_back({w.id, fit_beat(trace, w.window, opt)});
    } catch (const FitError& e) {
      rows.push_back({w.id, e.best()});
    }
  }
  return rows;
}

namespace {

// ---------------------------------------------------------------- tables

std::string clean(std::string s) {
  for (auto& ch : s) {
    if (ch == ',' || ch == '\n' || ch == '\r') ch = ';';
  }
  return s;
}

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::string str() const {
    std::ostringstream out;
    auto line = [&](const std::vector<std::string>& r) {
      for (std::size_t i = 0; i < r.size(); ++i) out << (i ? "," : "") << r[i];
      out << '\n';
    };
    line(header);
    for (const auto& r : rows) line(r);
    return out.str();
  }
};

struct Summary {
  Table t{{"quantity", "value", "std_error"}, {}};
  void add(const std::string& q, double v) { t.rows.push_back({q, fmt_exact(v), ""}); }
  void add(const std::string& q, Estimate e) {
    t.rows.push_back({q, fmt_exact(e.value), fmt_exact(e.std_error)});
  }
  void add(const std::string& q, const std::string& v) { t.rows.push_back({q, clean(v), ""}); }
  void add_fit(const std::string& prefix, const LineFit& f) {
    add(prefix + "_slope", f.slope);
    add(prefix + "_intercept", f.intercept);
    add(prefix + "_slope_intercept_cov", f.covariance);
    add(prefix + "_chi2_per_dof", f.chi2_per_dof);
    add(prefix + "_r_squared", f.r_squared);
  }
};

nlohmann::json cell(const std::string& s) {
  if (s.empty()) return nullptr;
  try {
    const double v = parse_double(s);
    if (std::isfinite(v)) return v;
  } catch (const std::invalid_argument&) {
  }
  return s;
}

nlohmann::json table_json(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<std::string> header;
  nlohmann::json rows = nlohmann::json::array();
  auto split = [](const std::string& l) {
    std::vector<std::string> out;
    std::stringstream ss(l);
    std::string f;
    while (std::getline(ss, f, ',')) out.push_back(f);
    if (!l.empty() && l.back() == ',') out.emplace_back();
    return out;
  };
  if (std::getline(in, line)) header = split(line);
  while (std::getline(in, line)) {
    const auto f = split(line);
    nlohmann::json row = nlohmann::json::object();
    for (std::size_t i = 0; i < header.size() && i < f.size(); ++i) row[header[i]] = cell(f[i]);
    rows.push_back(row);
  }
  return rows;
}

// ---------------------------------------------------------------- files

void write_text(const fs::path& path, const std::string& text) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("write failed for " + path.string());
}

std::string utc_now() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream out;
  out << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return out.str();
}

std::string point_dir(std::size_t i) { return "points/" + std::to_string(i); }

std::string rep_trace_name(std::size_t k) {
  std::ostringstream out;
  out << "trace_rep" << std::setw(2) << std::setfill('0') << k << ".csv";
  return out.str();
}

struct Clock {
  std::string started = utc_now();
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double elapsed() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
};

void finish(RunRecord& rec, const StudyPlan& plan, const Clock& clock) {
  rec.plan_snapshot = emit_plan(plan);
  rec.tool_version = LSS_VERSION;
  rec.started_utc = clock.started;
  rec.elapsed_s = clock.elapsed();
  if (plan.output_dir.empty()) return;
  const fs::path& out = plan.output_dir;
  write_text(out / "plan.cfg", rec.plan_snapshot);
  write_text(out / "summary.csv", rec.summary_csv);
  nlohmann::json j;
  j["tool_version"] = rec.tool_version;
  j["study"] = std::string(to_string(plan.kind));
  j["plan_file"] = "plan.cfg";
  j["seed_base"] = plan.seed_base;
  j["started_utc"] = rec.started_utc;
  j["elapsed_s"] = rec.elapsed_s;
  j["jobs"] = plan.jobs;
  j["trace_files"] = rec.trace_files;
  j["warnings"] = rec.warnings;
  j["summary"] = table_json(rec.summary_csv);
  j["points"] = table_json(rec.points_csv);
  write_text(out / "record.json", j.dump(2) + "\n");
}

// ---------------------------------------------------------------- spectroscopy

struct PointOutcome {
  SpectroscopyPoint point;
  std::vector<FitRow> fits;
  std::vector<std::string> trace_files;
  std::vector<std::string> warnings;
};

Estimate weighted_mean(const std::vector<Estimate>& v) {
  double sw = 0.0, swx = 0.0, plain = 0.0;
  bool zero = false;
  for (const auto& e : v) {
    plain += e.value;
    if (e.std_error <= 0.0) {
      zero = true;
      continue;
    }
    const double w = 1.0 / (e.std_error * e.std_error);
    sw += w;
    swx += w * e.value;
  }
  if (zero) return {plain / static_cast<double>(v.size()), 0.0};
  return {swx / sw, 1.0 / std::sqrt(sw)};
}

struct SpectroscopyJob {
  const StudyPlan& plan;
  ExperimentConfig base;
  std::vector<double> grid;
  std::uint64_t seed = 0;
  fs::path out;     // write target, empty for in-memory
  fs::path source;  // stored traces, empty to simulate
  std::string rel;  // prefix of out relative to the top-level run directory
  unsigned jobs = 1;
};

PointOutcome spectroscopy_point(const SpectroscopyJob& job, std::size_t i) {
  const StudyPlan& plan = job.plan;
  PointOutcome o;
  o.point.delta_r = job.grid[i];
  const ExperimentConfig cfg = job.base.with_delta_r(job.grid[i]);
  const PulseSequence seq = cfg.pulse_sequence();
  const auto windows = standard_windows(seq, plan.guard);
  const std::string pdir = point_dir(i);
  const bool by_trace = plan.averaging == Averaging::traces;

  std::vector<std::pair<std::string, PhotodiodeTrace>> traces;  // (file name, trace)
  if (!job.source.empty()) {
    const std::size_t count = by_trace ? 1 : plan.repetitions;
    for (std::size_t k = 0; k < count; ++k) {
      const std::string name = by_trace ? "trace.csv" : rep_trace_name(k);
      const fs::path path = job.source / pdir / name;
      if (!fs::exists(path)) {
        throw IoError("missing stored trace " + path.string() + " (was the run made with --no-traces?)");
      }
      traces.emplace_back(name, read_trace_csv(path));
      o.trace_files.push_back(path.string());
    }
  } else {
    const std::uint64_t point_seed = derive_seed(job.seed, i);
    std::vector<PhotodiodeTrace> reps;
    reps.reserve(plan.repetitions);
    for (std::size_t k = 0; k < plan.repetitions; ++k) {
      ExperimentConfig rc = cfg;
      rc.rng_seed = derive_seed(point_seed, k);
      reps.push_back(simulate_storage(rc, seq));
    }
    if (by_trace) {
      traces.emplace_back("trace.csv", average_traces(reps));
    } else {
      for (std::size_t k = 0; k < reps.size(); ++k) traces.emplace_back(rep_trace_name(k), std::move(reps[k]));
    }
    if (!job.out.empty() && plan.write_traces) {
      for (const auto& [name, tr] : traces) {
        fs::create_directories(job.out / pdir);
        write_trace_csv(job.out / pdir / name, tr);
        o.trace_files.push_back(job.rel + pdir + "/" + name);
      }
    }
  }

  std::vector<Estimate> f_in, f_ret;
  std::string note;
  for (std::size_t k = 0; k < traces.size(); ++k) {
    const std::string prefix = by_trace ? "" : "rep" + std::to_string(k) + "/";
    for (const auto& w : windows) {
      BeatFitOptions opt;
      opt.envelope = w.envelope;
      try {
        auto fit = fit_beat(traces[k].second, w.window, opt);
        for (const auto& msg : fit.warnings) o.warnings.push_back(pdir + " " + w.id + ": " + msg);
        (w.id == "input" ? f_in : f_ret).push_back(fit.f_b);
        o.fits.push_back({prefix + w.id, std::move(fit)});
      } catch (const FitError& e) {
        o.fits.push_back({prefix + w.id, e.best()});
        if (note.empty()) note = prefix + w.id + ": " + e.what();
      } catch (const NumericalError& e) {
        if (note.empty()) note = prefix + w.id + ": " + e.what();
      }
    }
  }
  if (by_trace) {
    o.point.included = f_in.size() == 1 && f_ret.size() == 1;
  } else {
    o.point.included = !f_in.empty() && !f_ret.empty();
  }
  if (o.point.included) {
    o.point.f_input = by_trace ? f_in[0] : weighted_mean(f_in);
    o.point.f_retrieved = by_trace ? f_ret[0] : weighted_mean(f_ret);
  }
  o.point.note = note;

  if (!job.out.empty()) {
    std::ostringstream fits;
    write_fits_csv(fits, o.fits);
    write_text(job.out / pdir / "fits.csv", fits.str());
  }
  return o;
}

struct SpectroscopyCore {
  SpectroscopyResult result;
  std::vector<std::vector<FitRow>> fits;
  std::vector<std::string> warnings;
  std::vector<std::string> trace_files;
  std::string summary_csv, points_csv;
};

SpectroscopyCore spectroscopy_core(const SpectroscopyJob& job) {
  std::vector<PointOutcome> outcomes(job.grid.size());
  parallel_for(job.grid.size(), job.jobs, [&](std::size_t i) { outcomes[i] = spectroscopy_point(job, i); });

  SpectroscopyCore core;
  std::vector<SpectroscopyPoint> points;
  for (auto& o : outcomes) {
    points.push_back(o.point);
    core.fits.push_back(std::move(o.fits));
    core.trace_files.insert(core.trace_files.end(), o.trace_files.begin(), o.trace_files.end());
    core.warnings.insert(core.warnings.end(), o.warnings.begin(), o.warnings.end());
  }

  Table pts{{"point", "delta_r_hz", "f_input_hz", "f_input_err_hz", "f_retrieved_hz",
             "f_retrieved_err_hz", "included", "note"},
            {}};
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& p = points[i];
    pts.rows.push_back({std::to_string(i), fmt_exact(p.delta_r), fmt_exact(p.f_input.value),
                        fmt_exact(p.f_input.std_error), fmt_exact(p.f_retrieved.value),
                        fmt_exact(p.f_retrieved.std_error), p.included ? "1" : "0", clean(p.note)});
  }
  core.points_csv = pts.str();
  if (!job.out.empty()) write_text(job.out / "points.csv", core.points_csv);

  core.result = analyze_spectroscopy(std::move(points));
  Summary s;
  s.add("points_included", static_cast<double>(core.result.n_included()));
  s.add_fit("input", core.result.input_fit);
  s.add_fit("retrieved", core.result.retrieved_fit);
  if (core.result.delta_f_ac) {
    s.add("delta_f_ac_hz", Estimate{core.result.delta_f_ac->x, core.result.delta_f_ac->std_error});
  } else {
    s.add("delta_f_ac_hz", std::numeric_limits<double>::quiet_NaN());
    s.add("delta_f_ac_note", core.result.delta_f_ac_note);
  }
  core.summary_csv = s.t.str();
  if (!job.out.empty()) write_text(job.out / "summary.csv", core.summary_csv);
  return core;
}

void check_window(const StudyPlan& plan, const std::vector<double>& grid, RunRecord& rec) {
  double reach = 0.0;
  for (double d : grid) reach = std::max(reach, std::abs(d));
  const auto probe = symmetric_grid(std::max(100e3, 4.0 * reach), 201);
  const double fwhm = window_fwhm(plan.base, probe);
  if (!std::isfinite(fwhm)) {
    rec.warnings.push_back("dark resonance width could not be resolved; delta_r grid not checked");
  } else if (reach > fwhm) {
    std::ostringstream msg;
    msg << "delta_r grid reaches " << reach << " Hz, outside the EIT window (FWHM " << fwhm << " Hz)";
    rec.warnings.push_back(msg.str());
  }
}

void write_two_column(const fs::path& path, const std::string& xname, const std::string& yname,
                      const std::vector<std::pair<double, double>>& xy) {
  std::ostringstream out;
  out << xname << ',' << yname << '\n';
  for (const auto& [x, y] : xy) out << fmt_exact(x) << ',' << fmt_exact(y) << '\n';
  write_text(path, out.str());
}

void append(std::vector<std::string>& to, const std::vector<std::string>& from) {
  to.insert(to.end(), from.begin(), from.end());
}

std::vector<std::string> config_warnings(const ExperimentConfig& c) { return validate(c); }

SpectroscopyRun spectroscopy_impl(const StudyPlan& plan, const fs::path& source) {
  if (plan.kind != StudyKind::spectroscopy) throw ConfigError("plan is not a spectroscopy study");
  plan.validate();
  Clock clock;
  SpectroscopyRun run;
  run.record.warnings = config_warnings(plan.base);
  check_window(plan, plan.grid, run.record);

  SpectroscopyJob job{plan, plan.base, plan.grid, plan.seed_base, plan.output_dir, source, "", plan.jobs};
  auto core = spectroscopy_core(job);
  run.result = std::move(core.result);
  run.fits = std::move(core.fits);
  append(run.record.warnings, core.warnings);
  run.record.trace_files = std::move(core.trace_files);
  run.record.summary_csv = std::move(core.summary_csv);
  run.record.points_csv = std::move(core.points_csv);

  if (!plan.output_dir.empty()) {
    std::vector<std::pair<double, double>> in, ret;
    for (const auto& p : run.result.points) {
      if (!p.included) continue;
      in.emplace_back(p.delta_r, p.f_input.value);
      ret.emplace_back(p.delta_r, p.f_retrieved.value);
    }
    write_two_column(plan.output_dir / "plotdata/input_beat.csv", "delta_r_hz", "f_b_hz", in);
    write_two_column(plan.output_dir / "plotdata/retrieved_beat.csv", "delta_r_hz", "f_b_hz", ret);
  }
  finish(run.record, plan, clock);
  run.warnings = run.record.warnings;
  return run;
}

// ---------------------------------------------------------------- sweeps

SweepRun sweep_impl(const StudyPlan& plan, const fs::path& source) {
  const bool control = plan.kind == StudyKind::control_sweep;
  if (!control && plan.kind != StudyKind::signal_sweep) throw ConfigError("plan is not a sweep study");
  plan.validate();
  Clock clock;
  SweepRun run;
  run.record.warnings = config_warnings(plan.base);
  check_window(plan, plan.delta_r_grid, run.record);
  run.model_slope = plan.base.light_shift.slope_per_intensity();

  struct Outer {
    SweepPoint point;
    std::vector<std::string> warnings, trace_files;
  };
  std::vector<Outer> outer(plan.grid.size());
  parallel_for(plan.grid.size(), plan.jobs, [&](std::size_t j) {
    const double v = plan.grid[j];
    const ExperimentConfig cfg = control ? plan.base.with_control_intensity(v).with_readout_intensity(v)
                                         : plan.base.with_signal_intensity(v);
    const std::string pdir = point_dir(j);
    SpectroscopyJob job{plan,
                        cfg,
                        plan.delta_r_grid,
                        derive_seed(plan.seed_base, j),
                        plan.output_dir.empty() ? fs::path() : plan.output_dir / pdir,
                        source.empty() ? fs::path() : source / pdir,
                        pdir + "/",
                        1};
    Outer& o = outer[j];
    o.point.value = v;
    try {
      auto core = spectroscopy_core(job);
      o.warnings = std::move(core.warnings);
      o.trace_files = std::move(core.trace_files);
      if (core.result.delta_f_ac) {
        o.point.delta_f_ac = core.result.delta_f_ac;
        o.point.included = o.point.delta_f_ac->std_error > 0.0;
        if (!o.point.included) o.point.note = "zero standard error on the light shift";
      } else {
        o.point.note = core.result.delta_f_ac_note;
      }
    } catch (const NumericalError& e) {
      o.point.note = e.what();
    }
  });

  std::vector<double> x, y, s, xr, yr, sr;
  const double i_c = plan.base.control.intensity;
  for (auto& o : outer) {
    append(run.record.warnings, o.warnings);
    append(run.record.trace_files, o.trace_files);
    run.points.push_back(o.point);
    if (!o.point.included) continue;
    x.push_back(o.point.value);
    y.push_back(o.point.delta_f_ac->x);
    s.push_back(o.point.delta_f_ac->std_error);
    if (!control && o.point.value <= i_c) {
      xr.push_back(o.point.value);
      yr.push_back(o.point.delta_f_ac->x);
      sr.push_back(o.point.delta_f_ac->std_error);
    }
  }

  const std::string var(swept_variable(plan.kind));
  Table pts{{"point", var, "delta_f_ac_hz", "delta_f_ac_err_hz", "included", "note"}, {}};
  for (std::size_t j = 0; j < run.points.size(); ++j) {
    const auto& p = run.points[j];
    const double nan = std::numeric_limits<double>::quiet_NaN();
    pts.rows.push_back({std::to_string(j), fmt_exact(p.value),
                        fmt_exact(p.delta_f_ac ? p.delta_f_ac->x : nan),
                        fmt_exact(p.delta_f_ac ? p.delta_f_ac->std_error : nan),
                        p.included ? "1" : "0", clean(p.note)});
  }
  run.record.points_csv = pts.str();

  if (x.size() < 3) {
    throw NumericalError("sweep: only " + std::to_string(x.size()) +
                         " intensities produced a light shift, need 3");
  }
  run.fit = linear_fit(x, y, s);
  Summary sum;
  sum.add("points_included", static_cast<double>(x.size()));
  sum.add_fit("light_shift", *run.fit);
  sum.add("light_shift_slope_t", slope_significance(*run.fit));
  sum.add("model_slope_hz_per_isat", run.model_slope);
  const auto& ls = plan.base.level_scheme;
  if (control) {
    const double cg2 = std::pow(primary_leg_weight(ls, plan.base.control), 2);
    sum.add("slope_per_cg2_intensity", Estimate{run.fit->slope.value / cg2, run.fit->slope.std_error / cg2});
  } else {
    const double cg2 = std::pow(primary_leg_weight(ls, plan.base.signal), 2);
    sum.add("slope_per_cg2_intensity", Estimate{run.fit->slope.value / cg2, run.fit->slope.std_error / cg2});
    sum.add("restricted_points", static_cast<double>(xr.size()));
    if (xr.size() >= 3) {
      run.restricted_fit = linear_fit(xr, yr, sr);
      sum.add_fit("restricted", *run.restricted_fit);
      sum.add("restricted_slope_t", slope_significance(*run.restricted_fit));
      sum.add("restricted_slope_per_cg2_intensity",
              Estimate{run.restricted_fit->slope.value / cg2, run.restricted_fit->slope.std_error / cg2});
    } else {
      run.record.warnings.push_back("fewer than 3 points with I_S <= I_C; restricted fit skipped");
    }
  }
  run.record.summary_csv = sum.t.str();

  if (!plan.output_dir.empty()) {
    write_text(plan.output_dir / "points.csv", run.record.points_csv);
    std::vector<std::pair<double, double>> xy;
    for (std::size_t k = 0; k < x.size(); ++k) xy.emplace_back(x[k], y[k]);
    write_two_column(plan.output_dir / "plotdata/light_shift.csv", var, "delta_f_ac_hz", xy);
  }
  finish(run.record, plan, clock);
  return run;
}

}  // namespace

SpectroscopyRun run_spectroscopy(const StudyPlan& plan) { return spectroscopy_impl(plan, {}); }

SweepRun run_control_sweep(const StudyPlan& plan) {
  if (plan.kind != StudyKind::control_sweep) throw ConfigError("plan is not a control_sweep study");
  return sweep_impl(plan, {});
}

SweepRun run_signal_sweep(const StudyPlan& plan) {
  if (plan.kind != StudyKind::signal_sweep) throw ConfigError("plan is not a signal_sweep study");
  return sweep_impl(plan, {});
}

DarkResonanceRun run_dark_resonance(const StudyPlan& plan) {
  if (plan.kind != StudyKind::dark_resonance) throw ConfigError("plan is not a dark_resonance study");
  plan.validate();
  Clock clock;
  DarkResonanceRun run;
  run.record.warnings = validate(plan.base);
  run.spectrum = transmission_spectrum(plan.base, plan.grid);
  run.shape = analyze_window(run.spectrum);
  if (!run.shape.resolved) run.record.warnings.push_back("transmission window not resolved on the grid");

  std::ostringstream spec;
  write_spectrum_csv(spec, run.spectrum);
  run.record.points_csv = spec.str();
  Summary s;
  s.add("fwhm_hz", run.shape.fwhm);
  s.add("peak_delta_r_hz", run.shape.peak_delta_r);
  s.add("peak_transmission", run.shape.peak_transmission);
  s.add("floor_transmission", run.shape.floor_transmission);
  s.add("resolved", run.shape.resolved ? 1.0 : 0.0);
  run.record.summary_csv = s.t.str();
  if (!plan.output_dir.empty()) {
    write_text(plan.output_dir / "spectrum.csv", run.record.points_csv);
    std::vector<std::pair<double, double>> xy;
    for (const auto& p : run.spectrum) xy.emplace_back(p.delta_r, p.transmission);
    write_two_column(plan.output_dir / "plotdata/transmission.csv", "delta_r_hz", "transmission", xy);
  }
  finish(run.record, plan, clock);
  return run;
}

RunRecord run_study(const StudyPlan& plan) {
  switch (plan.kind) {
    case StudyKind::dark_resonance: return run_dark_resonance(plan).record;
    case StudyKind::spectroscopy: return run_spectroscopy(plan).record;
    case StudyKind::control_sweep: return run_control_sweep(plan).record;
    case StudyKind::signal_sweep: return run_signal_sweep(plan).record;
    case StudyKind::fit_only: break;
  }
  throw ConfigError("fit_only plans run through the fit command");
}

RunRecord reanalyze(const fs::path& run_dir, const fs::path& out_dir, unsigned jobs) {
  StudyPlan plan = load_plan(run_dir / "plan.cfg");
  plan.output_dir = out_dir;
  plan.jobs = jobs;
  plan.write_traces = false;
  switch (plan.kind) {
    case StudyKind::dark_resonance: return run_dark_resonance(plan).record;
    case StudyKind::spectroscopy: return spectroscopy_impl(plan, run_dir).record;
    case StudyKind::control_sweep:
    case StudyKind::signal_sweep: return sweep_impl(plan, run_dir).record;
    case StudyKind::fit_only: break;
  }
  throw ConfigError("run directory holds a fit_only plan");
}

}  // namespace lss
