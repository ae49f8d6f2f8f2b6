#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "lss/errors.hpp"
#include "lss/orchestrator/config_io.hpp"
#include "lss/orchestrator/runner.hpp"
#include "lss/orchestrator/study_plan.hpp"
#include "lss/storage/synthesis.hpp"
#include "lss/storage/trace_io.hpp"
#include "lss/util/grid.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;
using namespace lss;

namespace {

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("lss_orch_" + std::to_string(::getpid())) / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void spit(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

StudyPlan small_spectroscopy() {
  auto p = default_plan(StudyKind::spectroscopy);
  p.grid = linspace(-10e3, 10e3, 5);
  p.repetitions = 3;
  return p;
}

int cli(const std::string& args) {
  const std::string cmd = std::string(LSS_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

double summary_value(const std::string& csv, const std::string& key) {
  std::istringstream in(csv);
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind(key + ",", 0) == 0) {
      const auto a = line.find(',');
      const auto b = line.find(',', a + 1);
      return std::stod(line.substr(a + 1, b - a - 1));
    }
  }
  throw std::runtime_error("no key " + key);
}

}  // namespace

TEST_CASE("derive_seed") {
  CHECK(derive_seed(7, 0) != derive_seed(7, 1));
  CHECK(derive_seed(7, 3) == derive_seed(7, 3));
  // splitmix64(1) from its reference implementation.
  CHECK(derive_seed(0, 1) == 0x910a2dec89025cc1ull);
  std::set<std::uint64_t> seen;
  for (std::uint64_t i = 0; i < 1000; ++i) seen.insert(derive_seed(42, i));
  CHECK(seen.size() == 1000);
}

TEST_CASE("parallel_for covers every index and rethrows") {
  for (unsigned jobs : {1u, 2u, 4u, 16u}) {
    std::vector<std::atomic<int>> hits(37);
    parallel_for(hits.size(), jobs, [&](std::size_t i) { ++hits[i]; });
    for (auto& h : hits) CHECK(h.load() == 1);
  }
  CHECK_THROWS_WITH(parallel_for(10, 3,
                                 [](std::size_t i) {
                                   if (i == 4 || i == 7) throw std::runtime_error("bad " + std::to_string(i));
                                 }),
                    "bad 4");
  parallel_for(0, 4, [](std::size_t) { FAIL("called"); });
}

TEST_CASE("plan validation") {
  auto p = default_plan(StudyKind::spectroscopy);
  p.validate();
  p.repetitions = 0;
  CHECK_THROWS_AS(p.validate(), ConfigError);
  p = default_plan(StudyKind::spectroscopy);
  p.grid = {1.0, 1.0, 2.0};
  CHECK_THROWS_AS(p.validate(), ConfigError);
  p.grid.clear();
  CHECK_THROWS_AS(p.validate(), ConfigError);
  CHECK(default_plan(StudyKind::dark_resonance).grid.size() == 401);
  CHECK(default_plan(StudyKind::spectroscopy).grid.size() == 9);
  CHECK(swept_variable(StudyKind::control_sweep) == "control_intensity");
  for (auto k : {StudyKind::dark_resonance, StudyKind::spectroscopy, StudyKind::control_sweep,
                 StudyKind::signal_sweep, StudyKind::fit_only}) {
    CHECK(parse_study_kind(to_string(k)) == k);
  }
  CHECK_THROWS_AS(parse_study_kind("bogus"), ConfigError);
}

TEST_CASE("config round trip is a fixed point") {
  for (auto k : {StudyKind::dark_resonance, StudyKind::spectroscopy, StudyKind::control_sweep,
                 StudyKind::signal_sweep}) {
    auto p = default_plan(k);
    p.seed_base = p.base.rng_seed = 987654321;
    p.repetitions = 4;
    p.averaging = Averaging::fits;
    const std::string text = emit_plan(p);
    const auto back = parse_plan(text, "mem");
    CHECK(back.kind == k);
    CHECK(back.grid == p.grid);
    CHECK(back.delta_r_grid == p.delta_r_grid);
    CHECK(back.repetitions == 4);
    CHECK(back.averaging == Averaging::fits);
    CHECK(back.seed_base == 987654321);
    CHECK(back.base.control.rabi_frequency == p.base.control.rabi_frequency);
    CHECK(back.base.light_shift.slope_per_intensity() == p.base.light_shift.slope_per_intensity());
    CHECK(emit_plan(back) == text);
  }
  // Random perturbations of the numeric fields survive exactly.
  oracle::Gen gen(51);
  for (int k = 0; k < 50; ++k) {
    auto c = default_config();
    c.magnetic.b0 = gen.uniform(0.1, 2.0);
    c.control.intensity = gen.log_uniform(0.1, 100.0);
    c.delta_r = gen.uniform(-1e4, 1e4);
    c.trace_noise_sigma = gen.uniform(0.0, 0.3);
    c = c.with_control_intensity(c.control.intensity);
    const auto text = emit_config(c);
    const auto d = parse_config(text, "mem");
    CHECK(d.magnetic.b0 == c.magnetic.b0);
    CHECK(d.control.intensity == c.control.intensity);
    CHECK(d.control.rabi_frequency == c.control.rabi_frequency);
    CHECK(d.delta_r == c.delta_r);
    CHECK(emit_config(d) == text);
  }
}

TEST_CASE("config errors name the line") {
  try {
    parse_plan("kappa: 3.0e12\nmagnetic:\n  b0: 0.49\n  bogus: 1\n", "x.yaml");
    FAIL("no error");
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("x.yaml:4") != std::string::npos);
    CHECK(msg.find("bogus") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_plan("kappa: [1, 2\n", "x.yaml"), ConfigError);
  CHECK_THROWS_AS(parse_plan("kappa: abc\n", "x.yaml"), ConfigError);
  CHECK_THROWS_AS(load_plan("/nonexistent/plan.yaml"), IoError);
}

TEST_CASE("missing keys keep the defaults") {
  const auto d = default_config();
  const auto c = parse_config("delta_r: 2500\n", "mem");
  CHECK(c.delta_r == 2500.0);
  CHECK(c.kappa == d.kappa);
  CHECK(c.control.rabi_frequency == d.control.rabi_frequency);
  const auto e = parse_config("", "mem");
  CHECK(emit_config(e) == emit_config(d));
  const auto p = parse_plan("study:\n  kind: control_sweep\n  repetitions: 2\n  grid: {start: 5, stop: 15, points: 3}\n",
                            "mem");
  CHECK(p.kind == StudyKind::control_sweep);
  CHECK(p.grid == std::vector<double>{5.0, 10.0, 15.0});
  CHECK(p.repetitions == 2);
  // The subcommand wins over the stored kind and then the stored grid is not used.
  const auto q = parse_plan("study:\n  kind: control_sweep\n  grid: [1, 2, 3]\n", "mem", StudyKind::spectroscopy);
  CHECK(q.kind == StudyKind::spectroscopy);
  CHECK(q.grid == default_plan(StudyKind::spectroscopy).grid);
}

TEST_CASE("serial and parallel runs are byte-identical") {
  auto p = small_spectroscopy();
  const auto serial = scratch("serial"), parallel = scratch("parallel");
  p.output_dir = serial;
  const auto a = run_spectroscopy(p);
  p.output_dir = parallel;
  p.jobs = 4;
  const auto b = run_spectroscopy(p);
  CHECK(a.record.summary_csv == b.record.summary_csv);
  CHECK(a.record.points_csv == b.record.points_csv);
  CHECK(slurp(serial / "summary.csv") == a.record.summary_csv);
  CHECK(slurp(serial / "summary.csv") == slurp(parallel / "summary.csv"));
  for (std::size_t i = 0; i < p.grid.size(); ++i) {
    const auto rel = fs::path("points") / std::to_string(i);
    CHECK(slurp(serial / rel / "trace.csv") == slurp(parallel / rel / "trace.csv"));
    CHECK(slurp(serial / rel / "fits.csv") == slurp(parallel / rel / "fits.csv"));
  }
  CHECK(a.record.trace_files.size() == p.grid.size());
  CHECK(fs::exists(parallel / "record.json"));
  CHECK(fs::exists(parallel / "plan.cfg"));
  CHECK(fs::exists(parallel / "plotdata/input_beat.csv"));
  CHECK(fs::exists(parallel / "plotdata/retrieved_beat.csv"));

  p.seed_base = p.base.rng_seed = 99;
  p.output_dir.clear();
  const auto c = run_spectroscopy(p);
  CHECK(c.record.summary_csv != a.record.summary_csv);
}

TEST_CASE("reanalysis reproduces the summary") {
  for (auto avg : {Averaging::traces, Averaging::fits}) {
    auto p = small_spectroscopy();
    p.averaging = avg;
    p.output_dir = scratch(avg == Averaging::traces ? "orig_t" : "orig_f");
    const auto a = run_spectroscopy(p);
    const auto r = reanalyze(p.output_dir, p.output_dir / "again", 2);
    CHECK(r.summary_csv == a.record.summary_csv);
    CHECK(r.points_csv == a.record.points_csv);
    CHECK(slurp(p.output_dir / "again/summary.csv") == slurp(p.output_dir / "summary.csv"));
  }
  auto p = small_spectroscopy();
  p.output_dir = scratch("no_traces");
  p.write_traces = false;
  run_spectroscopy(p);
  CHECK_THROWS_AS(reanalyze(p.output_dir, {}, 1), IoError);
}

TEST_CASE("noiseless spectroscopy without light shift crosses at zero") {
  auto p = small_spectroscopy();
  p.base.trace_noise_sigma = 0.0;
  p.base.light_shift.couplings.clear();
  p.repetitions = 1;
  const auto r = run_spectroscopy(p);
  CHECK(r.result.n_included() == 5);
  CHECK(r.result.input_fit.slope.value == doctest::Approx(1.0).epsilon(1e-9));
  // Both lines have unit slope minus pulling, so they are nearly parallel.
  CHECK(r.result.retrieved_fit.slope.value < 1e-3);
  REQUIRE(r.result.delta_f_ac.has_value());
  CHECK(std::abs(r.result.delta_f_ac->x) < 1e-3);
}

TEST_CASE("noiseless spectroscopy recovers the injected shift") {
  auto p = small_spectroscopy();
  p.base.trace_noise_sigma = 0.0;
  p.repetitions = 1;
  const auto r = run_spectroscopy(p);
  REQUIRE(r.result.delta_f_ac.has_value());
  CHECK(r.result.delta_f_ac->x == doctest::Approx(7000.0).epsilon(1e-4));
}

TEST_CASE("noiseless control sweep follows the light-shift model") {
  auto p = default_plan(StudyKind::control_sweep);
  p.base.trace_noise_sigma = 0.0;
  p.repetitions = 1;
  p.grid = linspace(6.0, 18.0, 4);
  p.delta_r_grid = linspace(-10e3, 10e3, 5);
  p.jobs = 2;
  const auto r = run_control_sweep(p);
  REQUIRE(r.fit.has_value());
  CHECK(r.points.size() == 4);
  for (const auto& pt : r.points) {
    CHECK(pt.included);
    CHECK(pt.delta_f_ac->x == doctest::Approx(r.model_slope * pt.value).epsilon(1e-6));
  }
  CHECK(r.fit->slope.value == doctest::Approx(r.model_slope).epsilon(1e-6));
  CHECK(std::abs(r.fit->intercept.value) < 1e-2);
}

TEST_CASE("noiseless signal sweep is flat at the control shift") {
  auto p = default_plan(StudyKind::signal_sweep);
  p.base.trace_noise_sigma = 0.0;
  p.repetitions = 1;
  p.grid = {2.0, 5.0, 8.0, 14.0};
  p.delta_r_grid = linspace(-10e3, 10e3, 5);
  const auto r = run_signal_sweep(p);
  REQUIRE(r.fit.has_value());
  for (const auto& pt : r.points) CHECK(pt.delta_f_ac->x == doctest::Approx(7000.0).epsilon(1e-4));
  CHECK(std::abs(r.fit->slope.value) < 1e-3);
  CHECK(r.restricted_fit.has_value());
  CHECK(summary_value(r.record.summary_csv, "restricted_points") == 3.0);
}

TEST_CASE("dark resonance run") {
  auto p = default_plan(StudyKind::dark_resonance);
  p.grid = symmetric_grid(100e3, 201);
  p.output_dir = scratch("dark");
  const auto r = run_dark_resonance(p);
  CHECK(r.shape.resolved);
  CHECK(r.shape.fwhm == doctest::Approx(20e3).epsilon(1e-2));
  CHECK(r.shape.peak_delta_r == 0.0);
  CHECK(slurp(p.output_dir / "spectrum.csv").rfind("delta_r_hz,transmission,absorption_proxy\n", 0) == 0);
  CHECK(summary_value(r.record.summary_csv, "fwhm_hz") == r.shape.fwhm);
}

TEST_CASE("grid outside the window warns") {
  auto p = small_spectroscopy();
  p.grid = linspace(-60e3, 60e3, 5);
  p.repetitions = 1;
  const auto r = run_spectroscopy(p);
  bool warned = false;
  for (const auto& w : r.warnings) warned |= w.find("EIT window") != std::string::npos;
  CHECK(warned);
}

TEST_CASE("fitting stored traces") {
  const auto c = default_config();
  const auto seq = c.pulse_sequence();
  const auto t = simulate_storage(c, seq);
  const auto rows = fit_trace(t, standard_windows(seq, 2e-6));
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].window_id == "input");
  CHECK(rows[1].window_id == "readout");
  CHECK(rows[0].fit.f_b.value == doctest::Approx(685815.76).epsilon(1e-4));
  CHECK(rows[1].fit.f_b.value == doctest::Approx(692815.76).epsilon(1e-3));
  const auto w = standard_windows(seq, 2e-6);
  CHECK(w[0].window.t_a == doctest::Approx(seq.phase(Phase::input).t_start + 2e-6));
  CHECK_FALSE(w[0].envelope);
  CHECK(w[1].envelope);
}

TEST_CASE("command line exit codes") {
  const auto dir = scratch("cli");
  CHECK(cli("--version") == 0);
  CHECK(cli("") == 1);
  CHECK(cli("spectroscopy --bogus") == 1);
  CHECK(cli("print-config") == 0);

  spit(dir / "bad.yaml", "magnetic:\n  nonsense: 1\n");
  CHECK(cli("spectroscopy --config " + (dir / "bad.yaml").string()) == 1);
  CHECK(cli("spectroscopy --config " + (dir / "missing.yaml").string()) == 3);

  spit(dir / "small.yaml", "study:\n  grid: [-5000, 0, 5000]\n  repetitions: 1\n");
  CHECK(cli("spectroscopy --config " + (dir / "small.yaml").string() + " --out " + (dir / "run").string()) == 0);
  CHECK(fs::exists(dir / "run/summary.csv"));
  CHECK(cli("fit --run " + (dir / "run").string()) == 0);
  CHECK(slurp(dir / "run/reanalysis/summary.csv") == slurp(dir / "run/summary.csv"));
  CHECK(cli("fit " + (dir / "run/points/0/trace.csv").string() + " --out " + (dir / "fit").string()) == 0);
  CHECK(slurp(dir / "fit/fits.csv").rfind("window_id,", 0) == 0);

  const auto trace = slurp(dir / "run/points/0/trace.csv");
  spit(dir / "cut.csv", trace.substr(0, trace.size() - 3));
  CHECK(cli("fit " + (dir / "cut.csv").string()) == 3);  // parse errors are I/O errors
  CHECK(cli("fit " + (dir / "nope.csv").string()) == 3);

  // One intensity cannot carry a line fit.
  spit(dir / "one.yaml", "study:\n  grid: [10]\n  delta_r_grid: [-5000, 0, 5000]\n  repetitions: 1\n");
  CHECK(cli("control-sweep --config " + (dir / "one.yaml").string()) == 2);

  CHECK(cli("spectroscopy --config " + (dir / "small.yaml").string() + " --jobs 0") == 1);
  CHECK(std::system(("LSS_JOBS=abc " + std::string(LSS_CLI_PATH) + " spectroscopy --config " +
                     (dir / "small.yaml").string() + " >/dev/null 2>&1").c_str()) != 0);
  CHECK(WEXITSTATUS(std::system(("LSS_JOBS=2 " + std::string(LSS_CLI_PATH) + " spectroscopy --config " +
                                 (dir / "small.yaml").string() + " >/dev/null 2>&1").c_str())) == 0);
  fs::remove_all(dir.parent_path());
}
