#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "lss/model/pulse_sequence.hpp"

namespace lss {

struct PhaseMarker {
  Phase phase = Phase::preparation;
  double t_start = 0.0;
  double t_end = 0.0;
};

// Uniformly sampled photodiode record. Sample i is taken at t0 + i / sample_rate.
struct PhotodiodeTrace {
  double t0 = 0.0;           // s
  double sample_rate = 0.0;  // samples/s
  std::vector<double> samples;
  std::vector<PhaseMarker> phase_markers;

  std::size_t size() const { return samples.size(); }
  double time_at(std::size_t i) const { return t0 + static_cast<double>(i) / sample_rate; }
  double duration() const { return static_cast<double>(samples.size()) / sample_rate; }

  // Index range [first, last) of samples with t_a <= t < t_b.
  std::pair<std::size_t, std::size_t> index_range(double t_a, double t_b) const;
};

std::vector<PhaseMarker> markers_from(const PulseSequence& sequence);

// Sample-wise mean of traces sharing t0, sample rate and length.
PhotodiodeTrace average_traces(std::span<const PhotodiodeTrace> traces);

}  // namespace lss
