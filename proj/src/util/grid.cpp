#include "lss/util/grid.hpp"

namespace lss {

std::vector<double> linspace(double lo, double hi, std::size_t n) {
  std::vector<double> out(n);
  if (n == 1) {
    out[0] = lo;
    return out;
  }
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  out.back() = hi;
  return out;
}

std::vector<double> symmetric_grid(double half_width, std::size_t n) {
  std::vector<double> out(n);
  if (n == 1) {
    out[0] = 0.0;
    return out;
  }
  const double m = static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    const double k = 2.0 * static_cast<double>(i) - m;
    out[i] = half_width * k / m;
  }
  return out;
}

bool strictly_monotone(const std::vector<double>& v) {
  if (v.size() < 2) return !v.empty();
  const bool up = v[1] > v[0];
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (up ? !(v[i] > v[i - 1]) : !(v[i] < v[i - 1])) return false;
  }
  return true;
}

}  // namespace lss
