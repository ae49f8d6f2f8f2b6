#include "lss/atom/lindblad.hpp"

#include <algorithm>
#include <cmath>

namespace lss {

namespace {

// Fractions of an excited level's decay into |g-> and |g+>.
std::pair<double, double> branching(const LevelScheme& scheme, Excited e) {
  if (scheme.branching == DecayBranching::equal) return {0.5, 0.5};
  auto strength = [&](Ground g) {
    const double a = scheme.weight(g, e, Polarization::sigma_plus);
    const double b = scheme.weight(g, e, Polarization::sigma_minus);
    return a * a + b * b;
  };
  const double m = strength(Ground::minus);
  const double p = strength(Ground::plus);
  if (m + p == 0.0) return {0.5, 0.5};
  return {m / (m + p), p / (m + p)};
}

}  // namespace

LindbladGenerator::LindbladGenerator(const Eigen::MatrixXcd& hamiltonian, const LevelScheme& scheme)
    : h_(hamiltonian) {
  const auto n = h_.rows();
  const std::complex<double> i(0.0, 1.0);
  k_ = -i * h_;

  auto add_decay = [&](std::size_t from, Excited e) {
    const auto [bm, bp] = branching(scheme, e);
    transfers_.push_back({from, basis::kGroundMinus, scheme.gamma_e * bm});
    transfers_.push_back({from, basis::kGroundPlus, scheme.gamma_e * bp});
    k_(from, from) -= 0.5 * scheme.gamma_e;
  };
  add_decay(basis::kExcited, Excited::primary);
  if (n == 4) add_decay(basis::kSecondExcited, Excited::secondary);

  dephasing_ = Eigen::VectorXd::Zero(n);
  const double c = std::sqrt(0.5 * scheme.gamma_gg);
  dephasing_(basis::kGroundMinus) = c;
  dephasing_(basis::kGroundPlus) = -c;
  for (Eigen::Index j = 0; j < n; ++j) k_(j, j) -= 0.5 * dephasing_(j) * dephasing_(j);

  rate_scale_ = std::max({h_.cwiseAbs().maxCoeff(), scheme.gamma_e, scheme.gamma_gg});
}

void LindbladGenerator::add_jumps(const Eigen::MatrixXcd& rho, Eigen::MatrixXcd& out) const {
  for (const auto& t : transfers_) {
    out(t.to, t.to) += t.rate * rho(t.from, t.from).real();
  }
  const auto n = rho.rows();
  for (Eigen::Index col = 0; col < n; ++col) {
    for (Eigen::Index row = 0; row < n; ++row) {
      out(row, col) += dephasing_(row) * dephasing_(col) * rho(row, col);
    }
  }
}

void LindbladGenerator::apply(const Eigen::MatrixXcd& rho, Eigen::MatrixXcd& out) const {
  const Eigen::MatrixXcd m = k_ * rho;
  out = m + m.adjoint();
  add_jumps(rho, out);
}

Eigen::MatrixXcd LindbladGenerator::apply(const Eigen::MatrixXcd& rho) const {
  Eigen::MatrixXcd out;
  apply(rho, out);
  return out;
}

Eigen::MatrixXcd LindbladGenerator::apply_linear(const Eigen::MatrixXcd& rho) const {
  Eigen::MatrixXcd out = k_ * rho + rho * k_.adjoint();
  // The transfer terms read the (real) excited population; for a general
  // basis matrix use the full complex diagonal element.
  for (const auto& t : transfers_) out(t.to, t.to) += t.rate * rho(t.from, t.from);
  const auto n = rho.rows();
  for (Eigen::Index col = 0; col < n; ++col) {
    for (Eigen::Index row = 0; row < n; ++row) {
      out(row, col) += dephasing_(row) * dephasing_(col) * rho(row, col);
    }
  }
  return out;
}

Eigen::MatrixXcd LindbladGenerator::superoperator() const {
  const auto n = h_.rows();
  Eigen::MatrixXcd s(n * n, n * n);
  for (Eigen::Index l = 0; l < n; ++l) {
    for (Eigen::Index k = 0; k < n; ++k) {
      Eigen::MatrixXcd e = Eigen::MatrixXcd::Zero(n, n);
      e(k, l) = 1.0;
      const Eigen::MatrixXcd col = apply_linear(e);
      s.col(k + n * l) = col.reshaped();
    }
  }
  return s;
}

double lindblad_residual(const LindbladGenerator& generator, const Eigen::MatrixXcd& rho) {
  const double scale = generator.rate_scale();
  const double norm = generator.apply(rho).norm();
  return scale > 0.0 ? norm / scale : norm;
}

}  // namespace lss
