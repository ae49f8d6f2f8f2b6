// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "lss/analysis/beat_fit.hpp"
#include "lss/analysis/line_fit.hpp"
#include "lss/atom/evolve.hpp"
#include "lss/atom/hamiltonian.hpp"
#include "lss/atom/lindblad.hpp"
#include "lss/atom/spectrum.hpp"
#include "lss/atom/steady_state.hpp"
#include "lss/orchestrator/runner.hpp"
#include "lss/orchestrator/study_plan.hpp"
#include "lss/util/grid.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;
using namespace lss;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

constexpr std::uint64_t kTrialBase = 0xacce55ull;
const double kInjectedShift = 7000.0;

// 1 ---------------------------------------------------------------------------
Outcome frequency_matching() {
  const auto run = run_spectroscopy(default_plan(StudyKind::spectroscopy));
  const auto& in = run.result.input_fit.slope;
  const auto& ret = run.result.retrieved_fit.slope;
  Outcome o;
  o.pass = run.result.n_included() == 9 && std::abs(in.value - 1.0) <= 0.02 && std::abs(ret.value) < 0.02;
  o.detail = fmt("input slope %.5f +- %.5f, retrieved slope %.5f +- %.5f, %zu/9 points", in.value,
                 in.std_error, ret.value, ret.std_error, run.result.n_included());
  return o;
}

// 2 ---------------------------------------------------------------------------
Outcome shift_recovery() {
  const int trials = 200;
  int in1 = 0, in3 = 0, failed = 0;
  for (int k = 0; k < trials; ++k) {
    auto plan = default_plan(StudyKind::spectroscopy);
    plan.seed_base = plan.base.rng_seed = derive_seed(kTrialBase, static_cast<std::uint64_t>(k));
    const auto run = run_spectroscopy(plan);
    if (!run.result.delta_f_ac) {
      ++failed;
      continue;
    }
    const double z = std::abs(run.result.delta_f_ac->x - kInjectedShift) / run.result.delta_f_ac->std_error;
    in1 += z <= 1.0;
    in3 += z <= 3.0;
  }
  Outcome o;
  o.pass = in1 >= 0.68 * trials && in3 >= 0.99 * trials;
  o.detail = fmt("within 1 sigma %d/%d (need 136), within 3 sigma %d/%d (need 198), no crossing %d",
                 in1, trials, in3, trials, failed);
  return o;
}

// 3 ---------------------------------------------------------------------------
SweepRun control_run() { return run_control_sweep(default_plan(StudyKind::control_sweep)); }

Outcome control_linearity(const SweepRun& run) {
  Outcome o;
  if (!run.fit) return {false, "no fit"};
  const auto& f = *run.fit;
  const double rel = std::abs(f.slope.value - run.model_slope) / run.model_slope;
  const bool intercept_ok = std::abs(f.intercept.value) <= 2.0 * f.intercept.std_error;
  o.pass = run.points.size() == 6 && f.n_points == 6 && rel <= 0.05 && f.r_squared >= 0.99 && intercept_ok;
  o.detail = fmt("slope %.2f +- %.2f Hz/I_sat vs model %.2f (%.2f%%), R^2 %.6f, intercept %.1f +- %.1f Hz",
                 f.slope.value, f.slope.std_error, run.model_slope, 100 * rel, f.r_squared,
                 f.intercept.value, f.intercept.std_error);
  return o;
}

// 4 ---------------------------------------------------------------------------
Outcome signal_insensitivity(const SweepRun& control) {
  const int trials = 100;
  const auto& base = default_config();
  const double cg_c = std::pow(primary_leg_weight(base.level_scheme, base.control), 2);
  const double cg_s = std::pow(primary_leg_weight(base.level_scheme, base.signal), 2);
  const double bound = std::abs(control.fit->slope.value / cg_c) / 30.0;
  int small_t = 0, under_bound = 0, failed = 0;
  double worst = 0.0;
  for (int k = 0; k < trials; ++k) {
    auto plan = default_plan(StudyKind::signal_sweep);
    plan.seed_base = plan.base.rng_seed = derive_seed(kTrialBase ^ 0x5,  static_cast<std::uint64_t>(k));
    SweepRun run;
    try {
      run = run_signal_sweep(plan);
    } catch (const NumericalError&) {
      ++failed;
      continue;
    }
    if (!run.restricted_fit) {
      ++failed;
      continue;
    }
    small_t += std::abs(slope_significance(*run.restricted_fit)) < 2.0;
    const double s = std::abs(run.restricted_fit->slope.value / cg_s);
    worst = std::max(worst, s);
    under_bound += s <= bound;
  }
  Outcome o;
  o.pass = small_t >= 0.95 * trials && under_bound == trials;
  o.detail = fmt("|t| < 2 in %d/%d (need 95); |slope| <= %.1f Hz/I_sat (control/30) in %d/%d, worst %.1f; "
                 "failed %d",
                 small_t, trials, bound, under_bound, trials, worst, failed);
  return o;
}

// 5 ---------------------------------------------------------------------------
Outcome dark_resonance() {
  const auto run = run_dark_resonance(default_plan(StudyKind::dark_resonance));
  double asym = 0.0;
  const auto& s = run.spectrum;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const auto& a = s[i];
    const auto& b = s[s.size() - 1 - i];
    if (a.delta_r != -b.delta_r) return {false, "grid is not symmetric"};
    asym = std::max(asym, std::abs(a.transmission - b.transmission));
  }
  Outcome o;
  const double fwhm = run.shape.fwhm;
  o.pass = run.shape.resolved && fwhm >= 10e3 && fwhm <= 40e3 && run.shape.peak_delta_r == 0.0 && asym < 1e-10;
  o.detail = fmt("FWHM %.1f Hz, peak at %g Hz, max |T(d) - T(-d)| %.2e", fwhm, run.shape.peak_delta_r, asym);
  return o;
}

// 6 ---------------------------------------------------------------------------
Outcome master_equation() {
  oracle::Gen gen(606);
  InvariantReport inv;
  std::size_t states = 0;
  for (int k = 0; k < 12; ++k) {
    auto c = default_config();
    if (k > 0) {
      c = c.with_control_intensity(gen.log_uniform(0.5, 40.0)).with_signal_intensity(gen.log_uniform(0.1, 40.0));
      c.control.one_photon_detuning = gen.uniform(-5e7, 5e7);
      c.delta_r = gen.uniform(-3e4, 3e4);
      if (k % 3 == 0) c.level_scheme.branching = DecayBranching::clebsch;
    }
    const auto seq = c.pulse_sequence();
    const auto rho0 = k % 2 ? DensityMatrix::mixed_ground(c.level_scheme.dimension())
                            : DensityMatrix::pure(c.level_scheme.dimension(), basis::kGroundPlus);
    EvolveOptions opt;
    opt.record_stride = 5;
    const auto traj = evolve(rho0, c, seq, opt);
    for (const auto& r : traj.states) inv.include(r);
    states += traj.states.size();
  }

  double worst_residual = 0.0;
  for (int k = 0; k < 60; ++k) {
    auto c = default_config();
    c.control.rabi_frequency = gen.log_uniform(1e4, 1e8);
    c.signal.rabi_frequency = gen.log_uniform(1e2, 1e8);
    c.control.one_photon_detuning = gen.uniform(-1e8, 1e8);
    const double dr = gen.uniform(-1e5, 1e5);
    const LindbladGenerator g(build_hamiltonian(c.level_scheme, c.control, c.signal, dr), c.level_scheme);
    worst_residual = std::max(worst_residual, lindblad_residual(g, steady_state(g).rho));
  }

  double worst_probe = 0.0;
  const auto base = default_config();
  const double wc = base.control.rabi_frequency, ws = 1e-5 * wc;
  for (double dr : {0.0, 2e3, -7.5e3, 2e4, 1e5}) {
    for (double big : {0.0, 2e6, -3e7}) {
      auto c = base;
      c.control.rabi_frequency = wc;
      c.signal.rabi_frequency = ws;
      c.control.one_photon_detuning = big;
      const auto rho = steady_state(c.level_scheme, c.control, c.signal, dr);
      const auto want = oracle::weak_probe_coherence(ws, wc, big + 2 * oracle::kPi * dr, dr,
                                                     c.level_scheme.gamma_e, c.level_scheme.gamma_gg);
      const auto got = rho.rho(basis::kExcited, basis::kGroundMinus);
      worst_probe = std::max(worst_probe, std::abs(got - want) / std::abs(want));
    }
  }
  Outcome o;
  o.pass = inv.satisfied() && worst_residual < 1e-10 && worst_probe < 1e-6;
  o.detail = fmt("%zu states: max |tr-1| %.1e, max herm %.1e, min eig %.1e; steady residual %.1e; "
                 "weak-probe rel err %.1e",
                 states, inv.max_trace_deviation, inv.max_hermiticity_deviation, inv.min_eigenvalue,
                 worst_residual, worst_probe);
  return o;
}

// 7 ---------------------------------------------------------------------------
Outcome estimator_oracles() {
  oracle::Gen gen(707);
  double worst_fit = 0.0;
  for (int k = 0; k < 40; ++k) {
    const bool env = k % 2 == 0;
    BeatModel m;
    m.dc_offset = gen.uniform(0.5, 2.0);
    m.dc_slope = gen.uniform(-1e4, 1e4);
    m.amplitude = gen.uniform(0.2, 3.0);
    m.phase = gen.uniform(-3.0, 3.0);
    m.frequency = gen.uniform(300e3, 1.5e6);
    m.t_ref = 20e-6;
    m.envelope_decay_time = env ? gen.uniform(10e-6, 100e-6) : std::numeric_limits<double>::infinity();
    PhotodiodeTrace t{20e-6, 1e7, std::vector<double>(400), {}};
    for (std::size_t i = 0; i < t.size(); ++i) t.samples[i] = m(t.time_at(i));
    BeatFitOptions opt;
    opt.envelope = env;
    const auto r = fit_beat(t, {20e-6, 60e-6}, opt);
    auto rel = [](double a, double b) { return std::abs(a - b) / std::abs(b); };
    worst_fit = std::max({worst_fit, rel(r.f_b.value, m.frequency), rel(r.amplitude.value, m.amplitude),
                          rel(r.dc_offset.value, m.dc_offset),
                          std::abs(std::remainder(r.phase.value - m.phase, 2 * oracle::kPi)) / std::abs(m.phase)});
    if (env) worst_fit = std::max(worst_fit, rel(r.envelope_decay_time.value, m.envelope_decay_time));
  }

  // Dyadic data keep every sum exact, so both routes must agree bit for bit.
  bool exact_lines = true;
  for (int k = 0; k < 100; ++k) {
    const int n = gen.integer(3, 12);
    std::vector<double> x(n), y(n), s(n);
    for (int i = 0; i < n; ++i) {
      x[i] = gen.integer(-16, 16) / 4.0;
      y[i] = gen.integer(-64, 64) / 8.0;
      s[i] = std::ldexp(1.0, gen.integer(-2, 2));
    }
    x[0] = -5.0;
    x[1] = 5.0;
    const auto f = linear_fit(x, y, s);
    const auto w = oracle::normal_equations(x, y, s);
    exact_lines &= f.slope.value == w.slope && f.intercept.value == w.intercept;
  }
  double worst_line = 0.0;
  for (int k = 0; k < 100; ++k) {
    const int n = gen.integer(3, 20);
    std::vector<double> x(n), y(n), s(n);
    for (int i = 0; i < n; ++i) {
      x[i] = gen.uniform(0.0, 30.0);
      y[i] = gen.uniform(-1e3, 1e3);
      s[i] = gen.log_uniform(0.1, 10.0);
    }
    const auto f = linear_fit(x, y, s);
    const auto w = oracle::normal_equations(x, y, s);
    worst_line = std::max({worst_line, std::abs(f.slope.value - w.slope) / std::abs(w.slope),
                           std::abs(f.slope.std_error - std::sqrt(w.var_slope)) / std::sqrt(w.var_slope)});
  }

  LineFit a, b;
  a.slope = {1.0, 0.0};
  a.intercept = {0.0, 0.0};
  b.slope = {0.0, 0.0};
  b.intercept = {7.0, 0.0};
  const auto x = intersection(a, b);

  Outcome o;
  o.pass = worst_fit <= 1e-6 && exact_lines && worst_line < 1e-10 && x.x == 7.0 && x.std_error == 0.0;
  o.detail = fmt("beat-fit worst rel err %.1e; dyadic line fits %s, random worst %.1e; y=x vs y=7 -> %g +- %g",
                 worst_fit, exact_lines ? "exact" : "NOT exact", worst_line, x.x, x.std_error);
  return o;
}

// 8 ---------------------------------------------------------------------------
Outcome determinism() {
  const fs::path root = fs::temp_directory_path() / ("lss_acceptance_" + std::to_string(::getpid()));
  fs::remove_all(root);
  int compared = 0, equal = 0;
  std::string bad;
  for (auto kind : {StudyKind::spectroscopy, StudyKind::control_sweep, StudyKind::signal_sweep}) {
    std::vector<std::string> sums;
    for (unsigned jobs : {1u, 4u, 1u}) {
      auto plan = default_plan(kind);
      plan.jobs = jobs;
      plan.write_traces = false;
      plan.output_dir = root / (std::string(to_string(kind)) + "_" + std::to_string(sums.size()));
      run_study(plan);
      sums.push_back(slurp(plan.output_dir / "summary.csv") + slurp(plan.output_dir / "points.csv"));
    }
    for (std::size_t i = 1; i < sums.size(); ++i) {
      ++compared;
      if (sums[i] == sums[0] && !sums[0].empty()) {
        ++equal;
      } else {
        bad += " " + std::string(to_string(kind));
      }
    }
  }
  fs::remove_all(root);
  Outcome o;
  o.pass = compared == equal;
  o.detail = fmt("%d/%d serial/parallel/repeat comparisons byte-identical%s", equal, compared,
                 bad.empty() ? "" : (" (differs:" + bad + ")").c_str());
  return o;
}

}  // namespace

int main() {
  int failures = 0;
  auto report = [&](int id, const char* name, const std::function<Outcome()>& f) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = f();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    failures += !o.pass;
    std::printf("%s %d %s: %s [%.2f s]\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.c_str(), dt);
    std::fflush(stdout);
  };
  SweepRun control;
  report(1, "frequency matching", frequency_matching);
  report(2, "closed-loop shift recovery", shift_recovery);
  report(3, "control-intensity linearity", [&] {
    control = control_run();
    return control_linearity(control);
  });
  report(4, "signal-intensity insensitivity", [&] {
    if (!control.fit) return Outcome{false, "needs the control sweep of criterion 3"};
    return signal_insensitivity(control);
  });
  report(5, "dark-resonance calibration", dark_resonance);
  report(6, "master-equation integrity", master_equation);
  report(7, "estimator oracles", estimator_oracles);
  report(8, "determinism", determinism);
  return failures == 0 ? 0 : 1;
}
