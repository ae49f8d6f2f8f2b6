#include "lss/atom/density_matrix.hpp"

#include <algorithm>
#include <cmath>

namespace lss {

DensityMatrix DensityMatrix::pure(std::size_t dimension, std::size_t state, double time) {
  DensityMatrix d{Eigen::MatrixXcd::Zero(dimension, dimension), time};
  d.rho(state, state) = 1.0;
  return d;
}

DensityMatrix DensityMatrix::mixed_ground(std::size_t dimension, double time) {
  DensityMatrix d{Eigen::MatrixXcd::Zero(dimension, dimension), time};
  d.rho(0, 0) = 0.5;
  d.rho(1, 1) = 0.5;
  return d;
}

double DensityMatrix::trace_deviation() const { return std::abs(rho.trace() - 1.0); }

double DensityMatrix::hermiticity_deviation() const {
  return (rho - rho.adjoint()).cwiseAbs().maxCoeff();
}

double DensityMatrix::min_eigenvalue() const {
  // Symmetrize so the eigensolver sees an exactly Hermitian matrix.
  const Eigen::MatrixXcd h = 0.5 * (rho + rho.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

void InvariantReport::include(const DensityMatrix& d) {
  max_trace_deviation = std::max(max_trace_deviation, d.trace_deviation());
  max_hermiticity_deviation = std::max(max_hermiticity_deviation, d.hermiticity_deviation());
  min_eigenvalue = std::min(min_eigenvalue, d.min_eigenvalue());
}

}  // namespace lss
