#include "lss/analysis/periodogram.hpp"

#include <cmath>
#include <cstddef>
#include <memory>
#include <mutex>
#include <stdexcept>

#include <fftw3.h>

namespace lss {

namespace {

// FFTW planning is not thread safe; execution is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwFree {
  void operator()(void* p) const { fftw_free(p); }
};
struct PlanDestroy {
  void operator()(fftw_plan_s* p) const {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(p);
  }
};

}  // namespace

double dominant_frequency(std::span<const double> samples, double sample_rate, int oversample) {
  const std::size_t n = samples.size();
  if (n < 4) throw std::invalid_argument("dominant_frequency: need at least 4 samples");
  std::size_t m = 1;
  while (m < static_cast<std::size_t>(oversample) * n) m <<= 1;

  // Linear detrend.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = static_cast<double>(i);
    sx += x;
    sy += samples[i];
    sxx += x * x;
    sxy += x * samples[i];
  }
  const double dn = static_cast<double>(n);
  const double slope = (dn * sxy - sx * sy) / (dn * sxx - sx * sx);
  const double offset = (sy - slope * sx) / dn;

  std::unique_ptr<double, FftwFree> in(static_cast<double*>(fftw_malloc(sizeof(double) * m)));
  std::unique_ptr<fftw_complex, FftwFree> out(
      static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * (m / 2 + 1))));
  std::unique_ptr<fftw_plan_s, PlanDestroy> plan;
  {
    std::lock_guard lock(planner_mutex());
    plan.reset(fftw_plan_dft_r2c_1d(static_cast<int>(m), in.get(), out.get(), FFTW_ESTIMATE));
  }
  for (std::size_t i = 0; i < m; ++i) {
    in.get()[i] = i < n ? samples[i] - (offset + slope * static_cast<double>(i)) : 0.0;
  }
  fftw_execute(plan.get());

  auto magnitude = [&](std::size_t k) { return std::hypot(out.get()[k][0], out.get()[k][1]); };
  const std::size_t k_min = std::max<std::size_t>(1, m / n);
  const std::size_t k_max = m / 2;
  std::size_t best = k_min;
  double best_mag = -1.0;
  for (std::size_t k = k_min; k < k_max; ++k) {
    const double v = magnitude(k);
    if (v > best_mag) {
      best_mag = v;
      best = k;
    }
  }
  double shift = 0.0;
  if (best > k_min && best + 1 < k_max) {
    const double a = magnitude(best - 1);
    const double b = best_mag;
    const double c = magnitude(best + 1);
    const double denom = a - 2.0 * b + c;
    if (denom != 0.0) shift = 0.5 * (a - c) / denom;
  }
  return (static_cast<double>(best) + shift) * sample_rate / static_cast<double>(m);
}

}  // namespace lss
