#include "lss/atom/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "lss/atom/hamiltonian.hpp"
#include "lss/atom/steady_state.hpp"
#include "lss/errors.hpp"
#include "lss/util/format.hpp"

namespace lss {

double absorption_proxy(const DensityMatrix& rho, const ExperimentConfig& config) {
  if (!(config.signal.rabi_frequency > 0.0)) {
    throw ConfigError("absorption proxy needs a nonzero signal Rabi frequency");
  }
  const auto legs = resolve_legs(config.control, config.signal);
  const auto gs = index_of(legs.signal_ground);
  return config.level_scheme.gamma_e * rho.rho(basis::kExcited, gs).imag() /
         config.signal.rabi_frequency;
}

std::vector<SpectrumPoint> transmission_spectrum(const ExperimentConfig& config,
                                                 std::span<const double> delta_r_grid) {
  if (delta_r_grid.empty()) throw ConfigError("transmission_spectrum: empty grid");
  if (!std::is_sorted(delta_r_grid.begin(), delta_r_grid.end())) {
    throw ConfigError("transmission_spectrum: grid must be sorted");
  }
  std::vector<SpectrumPoint> out;
  out.reserve(delta_r_grid.size());
  for (double d : delta_r_grid) {
    const auto rho = steady_state(config.with_delta_r(d));
    const double proxy = absorption_proxy(rho, config);
    const double t = std::exp(-config.optical_depth * std::max(proxy, 0.0));
    out.push_back({d, t, proxy});
  }
  return out;
}

WindowShape analyze_window(std::span<const SpectrumPoint> s) {
  WindowShape w;
  if (s.empty()) return w;
  const auto peak = std::max_element(s.begin(), s.end(), [](const auto& a, const auto& b) {
    return a.transmission < b.transmission;
  });
  const auto floor = std::min_element(s.begin(), s.end(), [](const auto& a, const auto& b) {
    return a.transmission < b.transmission;
  });
  w.peak_index = static_cast<std::size_t>(peak - s.begin());
  w.peak_delta_r = peak->delta_r;
  w.peak_transmission = peak->transmission;
  w.floor_transmission = floor->transmission;
  w.fwhm = std::numeric_limits<double>::quiet_NaN();

  const double half = 0.5 * (w.peak_transmission + w.floor_transmission);
  auto crossing = [&](std::size_t inside, std::size_t outside) {
    const double t0 = s[inside].transmission;
    const double t1 = s[outside].transmission;
    const double f = (t0 - half) / (t0 - t1);
    return s[inside].delta_r + f * (s[outside].delta_r - s[inside].delta_r);
  };

  std::size_t i = w.peak_index;
  while (i > 0 && s[i - 1].transmission >= half) --i;
  if (i == 0) return w;
  const double left = crossing(i, i - 1);

  std::size_t j = w.peak_index;
  while (j + 1 < s.size() && s[j + 1].transmission >= half) ++j;
  if (j + 1 == s.size()) return w;
  const double right = crossing(j, j + 1);

  w.fwhm = right - left;
  w.resolved = true;
  return w;
}

void write_spectrum_csv(std::ostream& out, std::span<const SpectrumPoint> spectrum) {
  out << "delta_r_hz,transmission,absorption_proxy\n";
  for (const auto& p : spectrum) {
    out << fmt_exact(p.delta_r) << ',' << fmt_exact(p.transmission) << ','
        << fmt_exact(p.absorption_proxy) << '\n';
  }
}

}  // namespace lss
