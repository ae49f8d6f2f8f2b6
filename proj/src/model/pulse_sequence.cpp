#include "lss/model/pulse_sequence.hpp"

#include <cmath>
#include <string>

#include "lss/errors.hpp"

namespace lss {

std::string_view to_string(Phase p) {
  switch (p) {
    case Phase::preparation: return "preparation";
    case Phase::input: return "input";
    case Phase::storage: return "storage";
    case Phase::readout: return "readout";
  }
  return "?";
}

PulseSequence::PulseSequence(std::vector<Segment> segments) : segments_(std::move(segments)) {
  if (segments_.empty()) throw ConfigError("pulse sequence: no segments");
  for (std::size_t i = 0; i < segments_.size(); ++i) {
    const auto& s = segments_[i];
    const std::string where = "pulse sequence segment " + std::to_string(i) + " (" +
                              std::string(to_string(s.phase)) + ")";
    if (!std::isfinite(s.t_start) || !std::isfinite(s.t_end) || !(s.t_end > s.t_start)) {
      throw ConfigError(where + ": needs finite t_start < t_end");
    }
    if (i > 0 && s.t_start != segments_[i - 1].t_end) {
      throw ConfigError(where + ": not contiguous with the previous segment");
    }
    if (s.phase == Phase::storage && (s.control_on || s.signal_on)) {
      throw ConfigError(where + ": both fields must be off during storage");
    }
    if (s.phase == Phase::readout && (!s.control_on || s.signal_on)) {
      throw ConfigError(where + ": readout requires control on and signal off");
    }
  }
}

PulseSequence PulseSequence::standard(double preparation, double input, double storage,
                                      double readout) {
  std::vector<Segment> seg;
  double t = 0.0;
  auto push = [&](Phase p, double d, bool c, bool s) {
    seg.push_back({p, t, t + d, c, s});
    t += d;
  };
  push(Phase::preparation, preparation, true, false);
  push(Phase::input, input, true, true);
  push(Phase::storage, storage, false, false);
  push(Phase::readout, readout, true, false);
  return PulseSequence(std::move(seg));
}

const Segment& PulseSequence::phase(Phase p) const {
  for (const auto& s : segments_) {
    if (s.phase == p) return s;
  }
  throw ConfigError("pulse sequence has no " + std::string(to_string(p)) + " phase");
}

bool PulseSequence::has_phase(Phase p) const {
  for (const auto& s : segments_) {
    if (s.phase == p) return true;
  }
  return false;
}

const Segment& PulseSequence::segment_at(double t) const {
  for (const auto& s : segments_) {
    if (t < s.t_end) return s;
  }
  return segments_.back();
}

}  // namespace lss
