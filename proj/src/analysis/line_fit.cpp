#include "lss/analysis/line_fit.hpp"

#include <cmath>
#include <sstream>

namespace lss {

LineFit linear_fit(std::span<const double> x, std::span<const double> y,
                   std::span<const double> sigma_y) {
  if (x.size() != y.size() || x.size() != sigma_y.size()) {
    throw ConfigError("linear_fit: x, y and sigma_y differ in length");
  }
  if (x.size() < 3) throw ConfigError("linear_fit: need at least 3 points");
  double s = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(sigma_y[i] > 0.0) || !std::isfinite(sigma_y[i])) {
      throw ConfigError("linear_fit: sigma_y must be positive and finite");
    }
    const double w = 1.0 / (sigma_y[i] * sigma_y[i]);
    s += w;
    sx += w * x[i];
    sy += w * y[i];
    sxx += w * x[i] * x[i];
    sxy += w * x[i] * y[i];
  }
  bool all_equal = true;
  for (double v : x) all_equal = all_equal && v == x[0];
  const double delta = s * sxx - sx * sx;
  if (all_equal || !(delta > 0.0)) throw RankError("linear_fit: all x values coincide");

  LineFit f;
  f.n_points = x.size();
  f.slope.value = (s * sxy - sx * sy) / delta;
  f.intercept.value = (sxx * sy - sx * sxy) / delta;
  f.slope.std_error = std::sqrt(s / delta);
  f.intercept.std_error = std::sqrt(sxx / delta);
  f.covariance = -sx / delta;

  const double y_mean = sy / s;
  double ss_tot = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double w = 1.0 / (sigma_y[i] * sigma_y[i]);
    const double r = y[i] - f(x[i]);
    f.chi2 += w * r * r;
    ss_tot += w * (y[i] - y_mean) * (y[i] - y_mean);
  }
  f.chi2_per_dof = f.chi2 / static_cast<double>(x.size() - 2);
  f.r_squared = ss_tot > 0.0 ? 1.0 - f.chi2 / ss_tot : 1.0;
  return f;
}

Intersection intersection(const LineFit& a, const LineFit& b) {
  const double dm = a.slope.value - b.slope.value;
  const double sigma_dm = std::sqrt(a.slope.std_error * a.slope.std_error +
                                    b.slope.std_error * b.slope.std_error);
  if (dm == 0.0 || std::abs(dm) <= 3.0 * sigma_dm) {
    std::ostringstream msg;
    msg << "intersection: slopes differ by " << dm << " with combined standard error "
        << sigma_dm << "; lines are too close to parallel";
    throw IllConditionedError(msg.str());
  }
  Intersection out;
  out.x = (b.intercept.value - a.intercept.value) / dm;
  // dx/db_b = 1/dm, dx/db_a = -1/dm, dx/dm_a = -x/dm, dx/dm_b = x/dm.
  const double x = out.x;
  const double var_b = b.intercept.std_error * b.intercept.std_error +
                       x * x * b.slope.std_error * b.slope.std_error + 2.0 * x * b.covariance;
  const double var_a = a.intercept.std_error * a.intercept.std_error +
                       x * x * a.slope.std_error * a.slope.std_error + 2.0 * x * a.covariance;
  out.std_error = std::sqrt(std::max(var_a + var_b, 0.0)) / std::abs(dm);
  return out;
}

double slope_significance(const LineFit& fit) {
  if (fit.slope.std_error == 0.0) {
    if (fit.slope.value == 0.0) return 0.0;
    throw DegenerateStatisticsError("slope_significance: slope has zero standard error");
  }
  return fit.slope.value / fit.slope.std_error;
}

}  // namespace lss
