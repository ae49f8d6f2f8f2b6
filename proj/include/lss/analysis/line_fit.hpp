#pragma once

#include <cstddef>
#include <span>

#include "lss/analysis/beat_fit.hpp"

namespace lss {

// Weighted straight line y = slope * x + intercept.
struct LineFit {
  Estimate slope;
  Estimate intercept;
  double covariance = 0.0;  // cov(slope, intercept)
  double chi2 = 0.0;
  double chi2_per_dof = 0.0;
  double r_squared = 0.0;  // weighted coefficient of determination
  std::size_t n_points = 0;

  double operator()(double x) const { return slope.value * x + intercept.value; }
};

// Closed-form weighted least squares from the normal equations. Standard
// errors are the formal ones from the sigma_y weights (not rescaled by chi2).
// Throws ConfigError for fewer than 3 points, mismatched lengths or
// non-positive sigma, RankError when all x coincide.
LineFit linear_fit(std::span<const double> x, std::span<const double> y,
                   std::span<const double> sigma_y);

struct Intersection {
  double x = 0.0;
  double std_error = 0.0;
};

// Abscissa where the two independent fits cross, with first-order error
// propagation. Throws IllConditionedError when the slopes differ by no more
// than 3 combined standard errors.
Intersection intersection(const LineFit& a, const LineFit& b);

// slope / SE(slope). Throws DegenerateStatisticsError for zero SE with a
// nonzero slope.
double slope_significance(const LineFit& fit);

}  // namespace lss
