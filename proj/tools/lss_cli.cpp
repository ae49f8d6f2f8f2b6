// Command-line driver for the light-storage spectroscopy studies.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "lss/errors.hpp"
#include "lss/orchestrator/config_io.hpp"
#include "lss/orchestrator/runner.hpp"
#include "lss/storage/trace_io.hpp"
#include "lss/util/format.hpp"

namespace fs = std::filesystem;

namespace {

struct CommonOptions {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> jobs;
  bool no_traces = false;
};

void add_common(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--config", o.config, "YAML configuration (defaults when omitted)");
  cmd->add_option("--out", o.out, "output directory");
  cmd->add_option("--seed", o.seed, "base RNG seed, overrides rng_seed");
  cmd->add_option("--jobs", o.jobs, "worker threads (LSS_JOBS when absent)")->check(CLI::PositiveNumber);
  cmd->add_flag("--no-traces", o.no_traces, "do not persist raw traces");
}

unsigned resolve_jobs(const CommonOptions& o) {
  if (o.jobs) return *o.jobs;
  if (const char* env = std::getenv("LSS_JOBS"); env && *env) {
    try {
      std::size_t used = 0;
      const long v = std::stol(env, &used);
      if (used == std::string(env).size() && v >= 1) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
    }
    throw lss::ConfigError(std::string("LSS_JOBS must be a positive integer, got '") + env + "'");
  }
  return 1;
}

lss::StudyPlan make_plan(const CommonOptions& o, lss::StudyKind kind) {
  lss::StudyPlan plan = o.config.empty() ? lss::default_plan(kind) : lss::load_plan(o.config, kind);
  if (o.seed) {
    plan.seed_base = *o.seed;
    plan.base.rng_seed = *o.seed;
  }
  plan.jobs = resolve_jobs(o);
  plan.write_traces = !o.no_traces;
  plan.output_dir = o.out;
  plan.validate();
  return plan;
}

void report(const lss::RunRecord& rec, const std::string& out) {
  for (const auto& w : rec.warnings) std::cerr << "warning: " << w << '\n';
  std::cout << rec.summary_csv;
  if (!out.empty()) std::cerr << "wrote " << out << '\n';
}

// "input", "readout", or "t_a:t_b" in seconds.
lss::NamedWindow parse_window(const std::string& spec, const std::vector<lss::NamedWindow>& named,
                              bool envelope) {
  for (const auto& w : named) {
    if (w.id == spec) return w;
  }
  const auto colon = spec.find(':');
  if (colon == std::string::npos) {
    throw lss::ConfigError("window must be 'input', 'readout' or t_a:t_b, got '" + spec + "'");
  }
  try {
    lss::NamedWindow w;
    w.id = spec;
    w.window = {lss::parse_double(spec.substr(0, colon)), lss::parse_double(spec.substr(colon + 1))};
    w.envelope = envelope;
    return w;
  } catch (const std::invalid_argument&) {
    throw lss::ConfigError("window bounds must be numbers: '" + spec + "'");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Light-storage spectroscopy simulator and analysis toolkit"};
  app.set_version_flag("--version", std::string(LSS_VERSION));
  app.require_subcommand(1);

  struct StudyCommand {
    const char* name;
    lss::StudyKind kind;
    const char* help;
  };
  const StudyCommand studies[] = {
      {"dark-resonance", lss::StudyKind::dark_resonance, "steady-state transmission spectrum"},
      {"spectroscopy", lss::StudyKind::spectroscopy, "beat frequencies against two-photon detuning"},
      {"control-sweep", lss::StudyKind::control_sweep, "light shift against control intensity"},
      {"signal-sweep", lss::StudyKind::signal_sweep, "light shift against signal intensity"},
  };
  CommonOptions opts;
  std::vector<std::pair<CLI::App*, lss::StudyKind>> study_cmds;
  for (const auto& s : studies) {
    auto* cmd = app.add_subcommand(s.name, s.help);
    add_common(cmd, opts);
    study_cmds.emplace_back(cmd, s.kind);
  }

  auto* fit = app.add_subcommand("fit", "fit stored traces, or re-analyse a run directory");
  add_common(fit, opts);
  std::vector<std::string> trace_files;
  std::vector<std::string> windows{"input", "readout"};
  std::string run_dir;
  bool envelope = false;
  fit->add_option("traces", trace_files, "trace CSV files");
  fit->add_option("--window", windows, "input, readout or t_a:t_b (s); repeatable");
  fit->add_flag("--envelope", envelope, "fit the exponential envelope on t_a:t_b windows");
  fit->add_option("--run", run_dir, "re-analyse this run directory from plan.cfg and stored traces");

  std::string print_kind = "spectroscopy";
  auto* print = app.add_subcommand("print-config", "print the effective configuration as YAML");
  print->add_option("--config", opts.config, "YAML configuration to merge over the defaults");
  print->add_option("--kind", print_kind, "study kind for the grid section");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    for (auto& [cmd, kind] : study_cmds) {
      if (!cmd->parsed()) continue;
      const auto plan = make_plan(opts, kind);
      report(lss::run_study(plan), opts.out);
      return 0;
    }
    if (print->parsed()) {
      const auto kind = lss::parse_study_kind(print_kind);
      const auto plan = opts.config.empty() ? lss::default_plan(kind) : lss::load_plan(opts.config, kind);
      std::cout << lss::emit_plan(plan);
      return 0;
    }
    if (fit->parsed()) {
      if (!run_dir.empty()) {
        if (!trace_files.empty()) throw lss::ConfigError("fit: give either --run or trace files");
        const std::string out = opts.out.empty() ? (fs::path(run_dir) / "reanalysis").string() : opts.out;
        report(lss::reanalyze(run_dir, out, resolve_jobs(opts)), out);
        return 0;
      }
      if (trace_files.empty()) throw lss::ConfigError("fit: no trace files given");
      const auto plan = make_plan(opts, lss::StudyKind::spectroscopy);
      const auto named = lss::standard_windows(plan.base.pulse_sequence(), plan.guard);
      std::vector<lss::NamedWindow> specs;
      for (const auto& w : windows) specs.push_back(parse_window(w, named, envelope));

      std::vector<lss::FitRow> rows;
      for (const auto& file : trace_files) {
        const auto trace = lss::read_trace_csv(fs::path(file));
        auto r = lss::fit_trace(trace, specs);
        for (auto& row : r) {
          if (trace_files.size() > 1) row.window_id = fs::path(file).stem().string() + "/" + row.window_id;
          rows.push_back(std::move(row));
        }
      }
      if (opts.out.empty()) {
        lss::write_fits_csv(std::cout, rows);
      } else {
        fs::create_directories(opts.out);
        const auto path = fs::path(opts.out) / "fits.csv";
        std::ofstream f(path);
        if (!f) throw lss::IoError("cannot write " + path.string());
        lss::write_fits_csv(f, rows);
        std::cerr << "wrote " << path.string() << '\n';
      }
      return 0;
    }
  } catch (const lss::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 1;
  } catch (const lss::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 2;
  } catch (const lss::IoError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return 3;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 1;
  } catch (const std::domain_error& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
