#include "lss/storage/trace.hpp"

#include <algorithm>
#include <cmath>

#include "lss/errors.hpp"

namespace lss {

std::pair<std::size_t, std::size_t> PhotodiodeTrace::index_range(double t_a, double t_b) const {
  auto to_index = [&](double t) {
    const double x = std::ceil((t - t0) * sample_rate - 1e-9);
    return static_cast<std::size_t>(std::clamp(x, 0.0, static_cast<double>(samples.size())));
  };
  const std::size_t first = to_index(t_a);
  const std::size_t last = std::max(first, to_index(t_b));
  return {first, last};
}

std::vector<PhaseMarker> markers_from(const PulseSequence& sequence) {
  std::vector<PhaseMarker> out;
  for (const auto& s : sequence.segments()) out.push_back({s.phase, s.t_start, s.t_end});
  return out;
}

PhotodiodeTrace average_traces(std::span<const PhotodiodeTrace> traces) {
  if (traces.empty()) throw ConfigError("average_traces: no traces");
  PhotodiodeTrace out = traces.front();
  for (std::size_t k = 1; k < traces.size(); ++k) {
    const auto& t = traces[k];
    if (t.size() != out.size() || t.sample_rate != out.sample_rate || t.t0 != out.t0) {
      throw ConfigError("average_traces: traces differ in timing");
    }
    for (std::size_t i = 0; i < out.size(); ++i) out.samples[i] += t.samples[i];
  }
  const double inv = 1.0 / static_cast<double>(traces.size());
  for (auto& v : out.samples) v *= inv;
  return out;
}

}  // namespace lss
