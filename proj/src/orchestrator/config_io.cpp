#include "lss/orchestrator/config_io.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "lss/errors.hpp"
#include "lss/util/format.hpp"
#include "lss/util/grid.hpp"

namespace lss {

namespace {

class Reader {
 public:
  explicit Reader(std::string source) : source_(std::move(source)) {}

  [[noreturn]] void fail(const YAML::Node& at, const std::string& what) const {
    const auto mark = at.Mark();
    std::string where = source_;
    if (mark.line >= 0) where += ":" + std::to_string(mark.line + 1);
    throw ConfigError(where + ": " + what);
  }

  // Rejects keys outside `allowed` and returns the node as a map.
  void check_keys(const YAML::Node& node, const std::string& section,
                  std::initializer_list<const char*> allowed) const {
    if (!node.IsMap()) fail(node, "'" + section + "' must be a mapping");
    const std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& kv : node) {
      const auto key = kv.first.as<std::string>();
      if (!ok.count(key)) fail(kv.first, "unknown key '" + key + "' in '" + section + "'");
    }
  }

  void number(const YAML::Node& map, const char* key, double& out) const {
    const auto n = map[key];
    if (!n) return;
    if (!n.IsScalar()) fail(n, std::string("'") + key + "' must be a number");
    try {
      out = parse_double(n.Scalar());
    } catch (const std::invalid_argument&) {
      fail(n, std::string("'") + key + "' must be a number, got '" + n.Scalar() + "'");
    }
  }

  void integer(const YAML::Node& map, const char* key, std::uint64_t& out) const {
    const auto n = map[key];
    if (!n) return;
    const std::string s = n.IsScalar() ? n.Scalar() : std::string();
    std::uint64_t v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size()) {
      fail(n, std::string("'") + key + "' must be a non-negative integer");
    }
    out = v;
  }

  void boolean(const YAML::Node& map, const char* key, bool& out) const {
    const auto n = map[key];
    if (!n) return;
    try {
      out = n.as<bool>();
    } catch (const YAML::Exception&) {
      fail(n, std::string("'") + key + "' must be true or false");
    }
  }

  std::optional<std::string> text(const YAML::Node& map, const char* key) const {
    const auto n = map[key];
    if (!n) return std::nullopt;
    if (!n.IsScalar()) fail(n, std::string("'") + key + "' must be a string");
    return n.Scalar();
  }

  template <class F>
  auto guarded(const YAML::Node& at, F&& f) const {
    try {
      return f();
    } catch (const ConfigError& e) {
      fail(at, e.what());
    }
  }

  std::vector<double> grid(const YAML::Node& n, const std::string& key) const {
    if (n.IsSequence()) {
      std::vector<double> out;
      for (const auto& v : n) {
        try {
          out.push_back(parse_double(v.Scalar()));
        } catch (const std::invalid_argument&) {
          fail(v, "'" + key + "' entries must be numbers");
        }
      }
      return out;
    }
    check_keys(n, key, {"start", "stop", "points"});
    double start = 0, stop = 0;
    std::uint64_t points = 0;
    if (!n["start"] || !n["stop"] || !n["points"]) fail(n, "'" + key + "' needs start, stop and points");
    number(n, "start", start);
    number(n, "stop", stop);
    integer(n, "points", points);
    if (points < 1) fail(n, "'" + key + "' needs at least one point");
    if (points == 1) return {start};
    if (start == -stop) return symmetric_grid(stop, points);
    return linspace(start, stop, points);
  }

 private:
  std::string source_;
};

void read_field(const Reader& r, const YAML::Node& n, const char* section, FieldConfig& f) {
  r.check_keys(n, section, {"intensity", "power", "one_photon_detuning", "polarization", "angle_alpha"});
  r.number(n, "intensity", f.intensity);
  r.number(n, "power", f.power);
  r.number(n, "one_photon_detuning", f.one_photon_detuning);
  r.number(n, "angle_alpha", f.angle_alpha);
  if (auto p = r.text(n, "polarization")) {
    f.polarization = r.guarded(n["polarization"], [&] { return parse_polarization(*p); });
  }
}

void read_level_scheme(const Reader& r, const YAML::Node& n, LevelScheme& ls) {
  r.check_keys(n, "level_scheme",
               {"ground_minus_label", "ground_plus_label", "excited_label", "second_excited",
                "gamma_e", "gamma_gg", "branching", "clebsch_weights", "four_level_dynamics"});
  if (auto s = r.text(n, "ground_minus_label")) ls.ground_minus_label = *s;
  if (auto s = r.text(n, "ground_plus_label")) ls.ground_plus_label = *s;
  if (auto s = r.text(n, "excited_label")) ls.excited_label = *s;
  r.number(n, "gamma_e", ls.gamma_e);
  r.number(n, "gamma_gg", ls.gamma_gg);
  if (auto s = r.text(n, "branching")) {
    if (*s == "equal") ls.branching = DecayBranching::equal;
    else if (*s == "clebsch") ls.branching = DecayBranching::clebsch;
    else r.fail(n["branching"], "branching must be 'equal' or 'clebsch'");
  }
  r.boolean(n, "four_level_dynamics", ls.four_level_dynamics);
  if (const auto se = n["second_excited"]) {
    if (se.IsNull()) {
      ls.second_excited.reset();
    } else {
      r.check_keys(se, "second_excited", {"label", "hyperfine_offset"});
      SecondExcitedLevel lvl = ls.second_excited.value_or(SecondExcitedLevel{});
      if (auto s = r.text(se, "label")) lvl.label = *s;
      r.number(se, "hyperfine_offset", lvl.hyperfine_offset);
      ls.second_excited = lvl;
    }
  }
  if (const auto cw = n["clebsch_weights"]) {
    if (!cw.IsSequence()) r.fail(cw, "'clebsch_weights' must be a list");
    ls.clebsch_weights.clear();
    for (const auto& w : cw) {
      r.check_keys(w, "clebsch_weights", {"ground", "excited", "polarization", "amplitude"});
      TransitionWeight t;
      if (!w["ground"] || !w["excited"] || !w["polarization"] || !w["amplitude"]) {
        r.fail(w, "each clebsch weight needs ground, excited, polarization and amplitude");
      }
      r.guarded(w, [&] {
        t.ground = parse_ground(*r.text(w, "ground"));
        t.excited = parse_excited(*r.text(w, "excited"));
        t.polarization = parse_polarization(*r.text(w, "polarization"));
        return 0;
      });
      r.number(w, "amplitude", t.amplitude);
      ls.clebsch_weights.push_back(t);
    }
  }
}

void read_light_shift(const Reader& r, const YAML::Node& n, LightShiftModel& m) {
  r.check_keys(n, "light_shift", {"linewidth", "kappa", "couplings"});
  r.number(n, "linewidth", m.linewidth);
  r.number(n, "kappa", m.kappa);
  if (const auto cs = n["couplings"]) {
    if (!cs.IsSequence()) r.fail(cs, "'couplings' must be a list");
    m.couplings.clear();
    for (const auto& c : cs) {
      r.check_keys(c, "couplings", {"label", "detuning", "weight"});
      LightShiftCoupling lc;
      if (auto s = r.text(c, "label")) lc.label = *s;
      r.number(c, "detuning", lc.detuning);
      r.number(c, "weight", lc.weight);
      m.couplings.push_back(lc);
    }
  }
}

void read_config(const Reader& r, const YAML::Node& root, ExperimentConfig& c) {
  if (const auto n = root["level_scheme"]) read_level_scheme(r, n, c.level_scheme);
  if (const auto n = root["control"]) read_field(r, n, "control", c.control);
  if (const auto n = root["signal"]) read_field(r, n, "signal", c.signal);
  if (const auto n = root["readout_intensity"]) {
    if (n.IsNull()) {
      c.readout_intensity.reset();
    } else {
      double v = 0.0;
      r.number(root, "readout_intensity", v);
      c.readout_intensity = v;
    }
  }
  if (const auto n = root["magnetic"]) {
    r.check_keys(n, "magnetic", {"b0", "g_f", "bohr_magneton_over_h"});
    r.number(n, "b0", c.magnetic.b0);
    r.number(n, "g_f", c.magnetic.g_f);
    r.number(n, "bohr_magneton_over_h", c.magnetic.bohr_magneton_over_h);
  }
  r.number(root, "delta_r", c.delta_r);
  r.number(root, "kappa", c.kappa);
  r.number(root, "optical_depth", c.optical_depth);
  if (const auto n = root["light_shift"]) read_light_shift(r, n, c.light_shift);
  r.number(root, "sample_rate", c.sample_rate);
  r.number(root, "trace_noise_sigma", c.trace_noise_sigma);
  r.number(root, "control_leak_fraction", c.control_leak_fraction);
  r.number(root, "storage_efficiency", c.storage_efficiency);
  r.number(root, "retrieval_decay_time", c.retrieval_decay_time);
  r.number(root, "collective_coupling", c.collective_coupling);
  if (const auto n = root["timing"]) {
    r.check_keys(n, "timing", {"preparation", "input", "storage", "readout"});
    r.number(n, "preparation", c.timing.preparation);
    r.number(n, "input", c.timing.input);
    r.number(n, "storage", c.timing.storage);
    r.number(n, "readout", c.timing.readout);
  }
  r.integer(root, "rng_seed", c.rng_seed);
  c.control.role = FieldRole::control;
  c.signal.role = FieldRole::signal;
  c.refresh_rabi_frequencies();
}

constexpr std::initializer_list<const char*> kConfigKeys = {
    "level_scheme", "control", "signal", "readout_intensity", "magnetic", "delta_r", "kappa",
    "optical_depth", "light_shift", "sample_rate", "trace_noise_sigma", "control_leak_fraction",
    "storage_efficiency", "retrieval_decay_time", "collective_coupling", "timing", "rng_seed"};

YAML::Node load_root(std::string_view text, const std::string& source) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(text));
  } catch (const YAML::ParserException& e) {
    throw ConfigError(source + ":" + std::to_string(e.mark.line + 1) + ": " + e.msg);
  }
  if (root.IsNull()) return YAML::Node(YAML::NodeType::Map);
  return root;
}

std::set<std::string> with_study(bool study) {
  std::set<std::string> keys(kConfigKeys.begin(), kConfigKeys.end());
  if (study) keys.insert("study");
  return keys;
}

void check_top(const Reader& r, const YAML::Node& root, bool allow_study) {
  if (!root.IsMap()) r.fail(root, "top level must be a mapping");
  const auto keys = with_study(allow_study);
  for (const auto& kv : root) {
    const auto key = kv.first.as<std::string>();
    if (!keys.count(key)) r.fail(kv.first, "unknown key '" + key + "'");
  }
}

}  // namespace

ExperimentConfig parse_config(std::string_view text, const std::string& source) {
  const Reader r(source);
  const auto root = load_root(text, source);
  check_top(r, root, true);
  ExperimentConfig c = default_config();
  read_config(r, root, c);
  return c;
}

StudyPlan parse_plan(std::string_view text, const std::string& source,
                     std::optional<StudyKind> kind) {
  const Reader r(source);
  const auto root = load_root(text, source);
  check_top(r, root, true);
  ExperimentConfig c = default_config();
  read_config(r, root, c);

  const auto study = root["study"];
  if (study) {
    r.check_keys(study, "study",
                 {"kind", "grid", "delta_r_grid", "repetitions", "averaging", "guard"});
  }
  StudyKind k = StudyKind::spectroscopy;
  if (study && study["kind"]) {
    k = r.guarded(study["kind"], [&] { return parse_study_kind(*r.text(study, "kind")); });
  }
  if (kind) k = *kind;

  StudyPlan p = default_plan(k, c);
  if (study) {
    // A stored grid belongs to the kind it was written for.
    const bool same_kind = !study["kind"] || parse_study_kind(study["kind"].Scalar()) == k;
    if (study["grid"] && same_kind) p.grid = r.grid(study["grid"], "grid");
    if (study["delta_r_grid"]) p.delta_r_grid = r.grid(study["delta_r_grid"], "delta_r_grid");
    std::uint64_t reps = p.repetitions;
    r.integer(study, "repetitions", reps);
    p.repetitions = static_cast<std::size_t>(reps);
    if (auto a = r.text(study, "averaging")) {
      p.averaging = r.guarded(study["averaging"], [&] { return parse_averaging(*a); });
    }
    r.number(study, "guard", p.guard);
  }
  p.validate();
  return p;
}

StudyPlan load_plan(const std::filesystem::path& file, std::optional<StudyKind> kind) {
  std::ifstream in(file);
  if (!in) throw IoError("cannot open config file " + file.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_plan(text.str(), file.string(), kind);
}

namespace {

void emit_number(YAML::Emitter& e, const char* key, double v) {
  e << YAML::Key << key << YAML::Value << fmt_exact(v);
}

void emit_field(YAML::Emitter& e, const char* key, const FieldConfig& f) {
  e << YAML::Key << key << YAML::Value << YAML::BeginMap;
  emit_number(e, "intensity", f.intensity);
  emit_number(e, "power", f.power);
  emit_number(e, "one_photon_detuning", f.one_photon_detuning);
  e << YAML::Key << "polarization" << YAML::Value << std::string(to_string(f.polarization));
  emit_number(e, "angle_alpha", f.angle_alpha);
  e << YAML::EndMap;
}

void emit_grid(YAML::Emitter& e, const char* key, const std::vector<double>& g) {
  e << YAML::Key << key << YAML::Value << YAML::Flow << YAML::BeginSeq;
  for (double v : g) e << fmt_exact(v);
  e << YAML::EndSeq;
}

void emit_config_body(YAML::Emitter& e, const ExperimentConfig& c) {
  const auto& ls = c.level_scheme;
  e << YAML::Key << "level_scheme" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "ground_minus_label" << YAML::Value << YAML::DoubleQuoted << ls.ground_minus_label;
  e << YAML::Key << "ground_plus_label" << YAML::Value << YAML::DoubleQuoted << ls.ground_plus_label;
  e << YAML::Key << "excited_label" << YAML::Value << YAML::DoubleQuoted << ls.excited_label;
  e << YAML::Key << "second_excited" << YAML::Value;
  if (ls.second_excited) {
    e << YAML::BeginMap;
    e << YAML::Key << "label" << YAML::Value << YAML::DoubleQuoted << ls.second_excited->label;
    emit_number(e, "hyperfine_offset", ls.second_excited->hyperfine_offset);
    e << YAML::EndMap;
  } else {
    e << YAML::Null;
  }
  emit_number(e, "gamma_e", ls.gamma_e);
  emit_number(e, "gamma_gg", ls.gamma_gg);
  e << YAML::Key << "branching" << YAML::Value
    << (ls.branching == DecayBranching::equal ? "equal" : "clebsch");
  e << YAML::Key << "four_level_dynamics" << YAML::Value << ls.four_level_dynamics;
  e << YAML::Key << "clebsch_weights" << YAML::Value << YAML::BeginSeq;
  for (const auto& w : ls.clebsch_weights) {
    e << YAML::Flow << YAML::BeginMap;
    e << YAML::Key << "ground" << YAML::Value << std::string(to_string(w.ground));
    e << YAML::Key << "excited" << YAML::Value << std::string(to_string(w.excited));
    e << YAML::Key << "polarization" << YAML::Value << std::string(to_string(w.polarization));
    emit_number(e, "amplitude", w.amplitude);
    e << YAML::EndMap;
  }
  e << YAML::EndSeq << YAML::EndMap;

  emit_field(e, "control", c.control);
  emit_field(e, "signal", c.signal);
  e << YAML::Key << "readout_intensity" << YAML::Value;
  if (c.readout_intensity) e << fmt_exact(*c.readout_intensity);
  else e << YAML::Null;

  e << YAML::Key << "magnetic" << YAML::Value << YAML::BeginMap;
  emit_number(e, "b0", c.magnetic.b0);
  emit_number(e, "g_f", c.magnetic.g_f);
  emit_number(e, "bohr_magneton_over_h", c.magnetic.bohr_magneton_over_h);
  e << YAML::EndMap;

  emit_number(e, "delta_r", c.delta_r);
  emit_number(e, "kappa", c.kappa);
  emit_number(e, "optical_depth", c.optical_depth);

  e << YAML::Key << "light_shift" << YAML::Value << YAML::BeginMap;
  emit_number(e, "linewidth", c.light_shift.linewidth);
  emit_number(e, "kappa", c.light_shift.kappa);
  e << YAML::Key << "couplings" << YAML::Value << YAML::BeginSeq;
  for (const auto& cp : c.light_shift.couplings) {
    e << YAML::Flow << YAML::BeginMap;
    e << YAML::Key << "label" << YAML::Value << YAML::DoubleQuoted << cp.label;
    emit_number(e, "detuning", cp.detuning);
    emit_number(e, "weight", cp.weight);
    e << YAML::EndMap;
  }
  e << YAML::EndSeq << YAML::EndMap;

  emit_number(e, "sample_rate", c.sample_rate);
  emit_number(e, "trace_noise_sigma", c.trace_noise_sigma);
  emit_number(e, "control_leak_fraction", c.control_leak_fraction);
  emit_number(e, "storage_efficiency", c.storage_efficiency);
  emit_number(e, "retrieval_decay_time", c.retrieval_decay_time);
  emit_number(e, "collective_coupling", c.collective_coupling);
  e << YAML::Key << "timing" << YAML::Value << YAML::BeginMap;
  emit_number(e, "preparation", c.timing.preparation);
  emit_number(e, "input", c.timing.input);
  emit_number(e, "storage", c.timing.storage);
  emit_number(e, "readout", c.timing.readout);
  e << YAML::EndMap;
  e << YAML::Key << "rng_seed" << YAML::Value << std::to_string(c.rng_seed);
}

}  // namespace

std::string emit_config(const ExperimentConfig& config) {
  YAML::Emitter e;
  e << YAML::BeginMap;
  emit_config_body(e, config);
  e << YAML::EndMap;
  return std::string(e.c_str()) + "\n";
}

std::string emit_plan(const StudyPlan& plan) {
  ExperimentConfig c = plan.base;
  c.rng_seed = plan.seed_base;
  YAML::Emitter e;
  e << YAML::BeginMap;
  emit_config_body(e, c);
  e << YAML::Key << "study" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "kind" << YAML::Value << std::string(to_string(plan.kind));
  emit_grid(e, "grid", plan.grid);
  emit_grid(e, "delta_r_grid", plan.delta_r_grid);
  e << YAML::Key << "repetitions" << YAML::Value << std::to_string(plan.repetitions);
  e << YAML::Key << "averaging" << YAML::Value << std::string(to_string(plan.averaging));
  emit_number(e, "guard", plan.guard);
  e << YAML::EndMap << YAML::EndMap;
  return std::string(e.c_str()) + "\n";
}

}  // namespace lss
