#pragma once

#include <span>
#include <string_view>
#include <vector>

namespace lss {

enum class Phase { preparation, input, storage, readout };

std::string_view to_string(Phase p);

struct Segment {
  Phase phase = Phase::preparation;
  double t_start = 0.0;  // s
  double t_end = 0.0;    // s
  bool control_on = false;
  bool signal_on = false;

  double duration() const { return t_end - t_start; }
};

// Time-ordered, contiguous list of segments. Construction validates; an
// invalid sequence never exists.
class PulseSequence {
 public:
  explicit PulseSequence(std::vector<Segment> segments);

  // preparation -> input -> storage -> readout starting at t = 0.
  static PulseSequence standard(double preparation, double input, double storage, double readout);

  std::span<const Segment> segments() const { return segments_; }
  const Segment& phase(Phase p) const;
  bool has_phase(Phase p) const;

  double t_begin() const { return segments_.front().t_start; }
  double t_end() const { return segments_.back().t_end; }
  double duration() const { return t_end() - t_begin(); }

  const Segment& segment_at(double t) const;

 private:
  std::vector<Segment> segments_;
};

}  // namespace lss
