#pragma once

#include <cstddef>

#include <Eigen/Dense>

namespace lss {

// Density matrix over the LevelScheme basis (see lss::basis) at a time stamp.
struct DensityMatrix {
  Eigen::MatrixXcd rho;
  double time = 0.0;  // s

  static DensityMatrix pure(std::size_t dimension, std::size_t state, double time = 0.0);
  static DensityMatrix mixed_ground(std::size_t dimension, double time = 0.0);

  std::size_t dimension() const { return static_cast<std::size_t>(rho.rows()); }
  double population(std::size_t i) const { return rho(i, i).real(); }

  double trace_deviation() const;        // |tr rho - 1|
  double hermiticity_deviation() const;  // max |rho - rho^dagger|
  double min_eigenvalue() const;
};

struct InvariantTolerances {
  double trace = 1e-9;
  double hermiticity = 1e-12;
  double positivity = 1e-9;
};

struct InvariantReport {
  double max_trace_deviation = 0.0;
  double max_hermiticity_deviation = 0.0;
  double min_eigenvalue = 1.0;

  void include(const DensityMatrix& rho);
  bool satisfied(const InvariantTolerances& tol = {}) const {
    return max_trace_deviation < tol.trace && max_hermiticity_deviation < tol.hermiticity &&
           min_eigenvalue > -tol.positivity;
  }
};

}  // namespace lss
