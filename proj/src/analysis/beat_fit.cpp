#include "lss/analysis/beat_fit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Dense>

#include "lss/analysis/periodogram.hpp"
#include "lss/model/constants.hpp"

namespace lss {

using constants::kTwoPi;

double BeatModel::operator()(double t) const {
  const double env = std::isinf(envelope_decay_time) ? 1.0 : std::exp(-(t - t_ref) / envelope_decay_time);
  return dc_offset + dc_slope * t + amplitude * env * std::sin(kTwoPi * frequency * t + phase);
}

BeatModel BeatFitResult::model() const {
  return {dc_offset.value, dc_slope.value, amplitude.value,          phase.value,
          f_b.value,       envelope_decay_time.value, t_ref};
}

namespace {

// Internal parameters live on the scaled time s = (t - t_a)/T in [0, 1):
//   V = c0 + c1 s + exp(-L s) (a sin(2 pi F s) + b cos(2 pi F s))
// with F = f T and L = T / tau. L is absent without an envelope.
enum : Eigen::Index { kC0, kC1, kA, kB, kF, kL };

struct Problem {
  Eigen::VectorXd s;
  Eigen::VectorXd y;
  bool envelope = false;

  Eigen::Index n_params() const { return envelope ? 6 : 5; }

  void residual(const Eigen::VectorXd& p, Eigen::VectorXd& r) const {
    r.resize(s.size());
    const double lam = envelope ? p(kL) : 0.0;
    for (Eigen::Index i = 0; i < s.size(); ++i) {
      const double w = kTwoPi * p(kF) * s(i);
      const double e = std::exp(-lam * s(i));
      r(i) = p(kC0) + p(kC1) * s(i) + e * (p(kA) * std::sin(w) + p(kB) * std::cos(w)) - y(i);
    }
  }

  void jacobian(const Eigen::VectorXd& p, Eigen::MatrixXd& j) const {
    j.resize(s.size(), n_params());
    const double lam = envelope ? p(kL) : 0.0;
    for (Eigen::Index i = 0; i < s.size(); ++i) {
      const double w = kTwoPi * p(kF) * s(i);
      const double e = std::exp(-lam * s(i));
      const double sn = std::sin(w), cs = std::cos(w);
      j(i, kC0) = 1.0;
      j(i, kC1) = s(i);
      j(i, kA) = e * sn;
      j(i, kB) = e * cs;
      j(i, kF) = e * (p(kA) * cs - p(kB) * sn) * kTwoPi * s(i);
      if (envelope) j(i, kL) = -s(i) * e * (p(kA) * sn + p(kB) * cs);
    }
  }
};

// Linear least squares for (c0, c1, a, b) with F and L held fixed.
Eigen::Vector4d solve_linear(const Eigen::VectorXd& s, const Eigen::VectorXd& y, double f,
                             double lam) {
  Eigen::MatrixXd d(s.size(), 4);
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    const double w = kTwoPi * f * s(i);
    const double e = std::exp(-lam * s(i));
    d(i, 0) = 1.0;
    d(i, 1) = s(i);
    d(i, 2) = e * std::sin(w);
    d(i, 3) = e * std::cos(w);
  }
  return d.colPivHouseholderQr().solve(y);
}

double wrap_phase(double phi) { return std::remainder(phi, kTwoPi); }

BeatFitResult to_physical(const Problem& prob, const Eigen::VectorXd& p, double cost,
                          double t_a, double span, bool want_covariance) {
  const Eigen::Index np = prob.n_params();
  const auto n = static_cast<double>(prob.s.size());
  BeatFitResult out;
  out.t_ref = t_a;
  out.n_samples = static_cast<std::size_t>(prob.s.size());
  out.rms_residual = std::sqrt(2.0 * cost / n);

  const double a = p(kA), b = p(kB);
  const double amp = std::hypot(a, b);
  const double lam = prob.envelope ? p(kL) : 0.0;
  out.f_b.value = p(kF) / span;
  out.amplitude.value = amp;
  out.phase.value = wrap_phase(std::atan2(b, a) - kTwoPi * p(kF) * t_a / span);
  out.dc_slope.value = p(kC1) / span;
  out.dc_offset.value = p(kC0) - p(kC1) * t_a / span;
  out.envelope_decay_time.value =
      lam == 0.0 ? std::numeric_limits<double>::infinity() : span / lam;
  if (!want_covariance) return out;

  Eigen::MatrixXd j;
  prob.jacobian(p, j);
  const double dof = n - static_cast<double>(np);
  const double s2 = 2.0 * cost / dof;
  const Eigen::MatrixXd cov = s2 * (j.transpose() * j).completeOrthogonalDecomposition().pseudoInverse();

  // Rows: c0_abs, c1, A, phi, f, tau.
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(6, np);
  g(0, kC0) = 1.0;
  g(0, kC1) = -t_a / span;
  g(1, kC1) = 1.0 / span;
  if (amp > 0.0) {
    g(2, kA) = a / amp;
    g(2, kB) = b / amp;
    g(3, kA) = -b / (amp * amp);
    g(3, kB) = a / (amp * amp);
  }
  g(3, kF) = -kTwoPi * t_a / span;
  g(4, kF) = 1.0 / span;
  if (prob.envelope && lam != 0.0) g(5, kL) = -span / (lam * lam);
  const Eigen::MatrixXd c = g * cov * g.transpose();
  auto se = [&](Eigen::Index k) { return std::sqrt(std::max(c(k, k), 0.0)); };
  out.dc_offset.std_error = se(0);
  out.dc_slope.std_error = se(1);
  out.amplitude.std_error = se(2);
  out.phase.std_error = se(3);
  out.f_b.std_error = se(4);
  out.envelope_decay_time.std_error = prob.envelope && lam != 0.0 ? se(5) : 0.0;
  return out;
}

}  // namespace

BeatFitResult fit_beat(const PhotodiodeTrace& trace, FitWindow window,
                       const BeatFitOptions& options) {
  if (!(trace.sample_rate > 0.0)) throw ConfigError("fit_beat: trace has no sample rate");
  const double eps = 0.5 / trace.sample_rate;
  if (!(window.t_b > window.t_a) || window.t_a < trace.t0 - eps ||
      window.t_b > trace.t0 + trace.duration() + eps) {
    std::ostringstream msg;
    msg << "fit_beat: window [" << window.t_a << ", " << window.t_b << ") s is not inside the trace";
    throw ConfigError(msg.str());
  }
  const auto [first, last] = trace.index_range(window.t_a, window.t_b);
  const Eigen::Index n = static_cast<Eigen::Index>(last - first);
  Problem prob;
  prob.envelope = options.envelope;
  const Eigen::Index np = prob.n_params();
  if (n < 3 * np) {
    throw ConfigError("fit_beat: window holds only " + std::to_string(n) + " samples");
  }

  const double t_a = window.t_a;
  const double span = window.t_b - window.t_a;
  prob.s.resize(n);
  prob.y.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto k = first + static_cast<std::size_t>(i);
    prob.s(i) = (trace.time_at(k) - t_a) / span;
    prob.y(i) = trace.samples[k];
  }

  // A window with nothing but a straight line cannot be fitted.
  {
    Eigen::MatrixXd d(n, 2);
    d.col(0).setOnes();
    d.col(1) = prob.s;
    const Eigen::VectorXd line = d * d.colPivHouseholderQr().solve(prob.y);
    const double rms = std::sqrt((prob.y - line).squaredNorm() / static_cast<double>(n));
    if (rms <= 1e-12 * std::max(prob.y.cwiseAbs().maxCoeff(), 1e-300)) {
      throw LowSnrError("fit_beat: window carries no modulation");
    }
  }

  const double f0 = options.f_guess ? *options.f_guess
                                    : dominant_frequency({prob.y.data(), static_cast<std::size_t>(n)},
                                                         trace.sample_rate, options.oversample);
  Eigen::VectorXd p(np);
  p(kF) = f0 * span;
  double lam0 = 0.0;
  if (prob.envelope) {
    const Eigen::Index h = n / 2;
    const auto c1 = solve_linear(prob.s.head(h), prob.y.head(h), p(kF), 0.0);
    const auto c2 = solve_linear(prob.s.tail(n - h), prob.y.tail(n - h), p(kF), 0.0);
    const double a1 = std::hypot(c1(2), c1(3)), a2 = std::hypot(c2(2), c2(3));
    if (a1 > 0.0 && a2 > 0.0) lam0 = std::clamp(2.0 * std::log(a1 / a2), -20.0, 50.0);
    p(kL) = lam0;
  }
  p.head<4>() = solve_linear(prob.s, prob.y, p(kF), lam0);

  // Levenberg-Marquardt with Marquardt's diagonal scaling.
  Eigen::VectorXd r, r_new;
  Eigen::MatrixXd j;
  prob.residual(p, r);
  double cost = 0.5 * r.squaredNorm();
  double mu = 1e-3;
  bool converged = false;
  std::size_t iter = 0;
  while (iter < options.max_iterations && !converged) {
    ++iter;
    prob.jacobian(p, j);
    const Eigen::MatrixXd jtj = j.transpose() * j;
    const Eigen::VectorXd grad = j.transpose() * r;
    const Eigen::VectorXd diag = jtj.diagonal().cwiseMax(1e-300);
    bool accepted = false;
    while (!accepted) {
      Eigen::MatrixXd lhs = jtj;
      lhs.diagonal() += mu * diag;
      const Eigen::VectorXd step = lhs.ldlt().solve(-grad);
      const Eigen::VectorXd trial = p + step;
      prob.residual(trial, r_new);
      const double cost_new = 0.5 * r_new.squaredNorm();
      if (std::isfinite(cost_new) && cost_new < cost) {
        const double drop = cost - cost_new;
        const double size = (step.cwiseAbs().array() /
                             (p.cwiseAbs().array() + diag.cwiseSqrt().cwiseInverse().array()))
                                .maxCoeff();
        p = trial;
        r.swap(r_new);
        cost = cost_new;
        mu = std::max(mu / 3.0, 1e-12);
        accepted = true;
        if (size < 1e-12 || drop <= 1e-15 * cost) converged = true;
      } else {
        mu *= 4.0;
        if (mu > 1e14) {
          // No descent direction left: the current point is a minimum to
          // working precision.
          converged = true;
          break;
        }
      }
    }
  }

  if (p(kF) < 0.0) {
    p(kF) = -p(kF);
    p(kA) = -p(kA);
  }
  if (!converged || !(p(kF) > 0.0)) {
    BeatFitResult best = to_physical(prob, p, cost, t_a, span, false);
    best.converged = false;
    best.n_iterations = iter;
    throw FitError(converged ? "fit_beat: fitted frequency collapsed to zero"
                             : "fit_beat: no convergence after " + std::to_string(iter) +
                                   " iterations",
                   std::move(best));
  }

  BeatFitResult out = to_physical(prob, p, cost, t_a, span, true);
  out.converged = true;
  out.n_iterations = iter;
  if (out.amplitude.value < options.low_snr_factor * out.rms_residual) {
    std::ostringstream msg;
    msg << "fit_beat: modulation amplitude " << out.amplitude.value << " is below "
        << options.low_snr_factor << "x the residual rms " << out.rms_residual;
    throw LowSnrError(msg.str());
  }
  if (p(kF) < 10.0) {
    std::ostringstream msg;
    msg << "window spans only " << p(kF) << " beat periods";
    out.warnings.push_back(msg.str());
  }
  return out;
}

}  // namespace lss
