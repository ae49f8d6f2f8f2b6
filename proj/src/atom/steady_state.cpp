#include "lss/atom/steady_state.hpp"

#include <cmath>
#include <sstream>
#include <vector>

#include "lss/atom/hamiltonian.hpp"
#include "lss/errors.hpp"

namespace lss {

namespace {

// Singular values below this fraction of the largest count as zero modes.
constexpr double kZeroModeTolerance = 1e-12;

std::string describe_mode(const Eigen::VectorXcd& v, Eigen::Index n) {
  std::ostringstream out;
  out << "{";
  bool first = true;
  for (Eigen::Index idx = 0; idx < v.size(); ++idx) {
    if (std::abs(v(idx)) < 0.1) continue;
    if (!first) out << " + ";
    first = false;
    out << "|" << idx % n << "><" << idx / n << "|";
  }
  out << "}";
  return out.str();
}

}  // namespace

DensityMatrix steady_state(const LindbladGenerator& generator) {
  const auto n = static_cast<Eigen::Index>(generator.dimension());
  const Eigen::MatrixXcd s = generator.superoperator();
  if (s.cwiseAbs().maxCoeff() == 0.0) {
    throw SteadyStateError("steady_state: generator vanishes identically");
  }

  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(s, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double threshold = kZeroModeTolerance * sv(0);
  std::vector<Eigen::Index> zero_modes;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) <= threshold) zero_modes.push_back(i);
  }
  if (zero_modes.size() > 1) {
    std::ostringstream msg;
    msg << "steady_state: " << zero_modes.size()
        << "-dimensional stationary space (basis |row><col|); zero modes:";
    for (auto i : zero_modes) msg << " " << describe_mode(svd.matrixV().col(i), n);
    throw SteadyStateError(msg.str());
  }

  // Replace the |0><0| population equation by the trace condition.
  Eigen::MatrixXcd a = s;
  a.row(0).setZero();
  for (Eigen::Index k = 0; k < n; ++k) a(0, k + n * k) = 1.0;
  Eigen::VectorXcd b = Eigen::VectorXcd::Zero(n * n);
  b(0) = 1.0;

  const Eigen::PartialPivLU<Eigen::MatrixXcd> lu(a);
  Eigen::VectorXcd x = lu.solve(b);
  x += lu.solve(b - a * x);  // one refinement step

  DensityMatrix out{x.reshaped(n, n), 0.0};
  out.rho = 0.5 * (out.rho + out.rho.adjoint()).eval();
  return out;
}

DensityMatrix steady_state(const LevelScheme& scheme, const FieldConfig& control,
                           const FieldConfig& signal, double delta_r) {
  if (scheme.gamma_e <= 0.0 && scheme.gamma_gg <= 0.0) {
    throw SteadyStateError("steady_state: no decay channel (gamma_e = gamma_gg = 0)");
  }
  return steady_state(
      LindbladGenerator(build_hamiltonian(scheme, control, signal, delta_r), scheme));
}

DensityMatrix steady_state(const ExperimentConfig& config) {
  return steady_state(config.level_scheme, config.control, config.signal, config.delta_r);
}

}  // namespace lss
