#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "lss/model/level_scheme.hpp"

namespace lss {

// Lindblad generator for a Hamiltonian over the scheme basis. Channels:
//   - each excited level decays to |g-> and |g+> at total rate gamma_e,
//     branching equally or by squared Clebsch-Gordan weights;
//   - pure ground-state dephasing L = sqrt(gamma_gg/2) (P_- - P_+), which damps
//     the |g-><g+| coherence at gamma_gg.
class LindbladGenerator {
 public:
  LindbladGenerator(const Eigen::MatrixXcd& hamiltonian, const LevelScheme& scheme);

  std::size_t dimension() const { return static_cast<std::size_t>(h_.rows()); }

  // d(rho)/dt for Hermitian rho. Evaluated as M + M^dagger + jumps with
  // M = K rho, so the result is exactly Hermitian in floating point.
  void apply(const Eigen::MatrixXcd& rho, Eigen::MatrixXcd& out) const;
  Eigen::MatrixXcd apply(const Eigen::MatrixXcd& rho) const;

  // Matrix of the generator acting on column-major vec(rho).
  Eigen::MatrixXcd superoperator() const;

  // Largest frequency scale (rad/s) among Hamiltonian entries and rates.
  double rate_scale() const { return rate_scale_; }

  const Eigen::MatrixXcd& hamiltonian() const { return h_; }

 private:
  struct Transfer {
    std::size_t from;
    std::size_t to;
    double rate;
  };

  Eigen::MatrixXcd apply_linear(const Eigen::MatrixXcd& rho) const;
  void add_jumps(const Eigen::MatrixXcd& rho, Eigen::MatrixXcd& out) const;

  Eigen::MatrixXcd h_;
  Eigen::MatrixXcd k_;  // -iH - 1/2 sum L^dagger L
  std::vector<Transfer> transfers_;
  Eigen::VectorXd dephasing_;  // diagonal of the dephasing collapse operator
  double rate_scale_ = 0.0;
};

// ||L rho|| / rate_scale: the generator residual in units of its own largest
// frequency scale.
double lindblad_residual(const LindbladGenerator& generator, const Eigen::MatrixXcd& rho);

}  // namespace lss
