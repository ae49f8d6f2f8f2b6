#include "lss/atom/evolve.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>

#include <boost/numeric/odeint.hpp>

#include "lss/atom/hamiltonian.hpp"
#include "lss/atom/lindblad.hpp"
#include "lss/errors.hpp"

namespace lss {

namespace {

namespace odeint = boost::numeric::odeint;
using State = std::vector<double>;  // interleaved re/im of column-major rho

LindbladGenerator segment_generator(const ExperimentConfig& config, const Segment& seg) {
  const FieldConfig control = !seg.control_on              ? config.control.switched_off()
                              : seg.phase == Phase::readout ? config.readout_control()
                                                            : config.control;
  const FieldConfig signal = seg.signal_on ? config.signal : config.signal.switched_off();
  return LindbladGenerator(build_hamiltonian(config.level_scheme, control, signal, config.delta_r),
                           config.level_scheme);
}

Eigen::Map<const Eigen::MatrixXcd> view(const State& x, Eigen::Index n) {
  return {reinterpret_cast<const std::complex<double>*>(x.data()), n, n};
}

Eigen::Map<Eigen::MatrixXcd> view(State& x, Eigen::Index n) {
  return {reinterpret_cast<std::complex<double>*>(x.data()), n, n};
}

DensityMatrix snapshot(const State& x, Eigen::Index n, double t) {
  return {Eigen::MatrixXcd(view(x, n)), t};
}

}  // namespace

double max_rate_scale(const ExperimentConfig& config, const PulseSequence& sequence) {
  double scale = 0.0;
  for (const auto& seg : sequence.segments()) {
    scale = std::max(scale, segment_generator(config, seg).rate_scale());
  }
  return scale;
}

Trajectory evolve(const DensityMatrix& rho0, const ExperimentConfig& config,
                  const PulseSequence& sequence, double dt_max) {
  EvolveOptions options;
  options.dt_max = dt_max;
  return evolve(rho0, config, sequence, options);
}

Trajectory evolve(const DensityMatrix& rho0, const ExperimentConfig& config,
                  const PulseSequence& sequence, const EvolveOptions& options) {
  const auto n = static_cast<Eigen::Index>(config.level_scheme.dimension());
  if (rho0.rho.rows() != n || rho0.rho.cols() != n) {
    throw ConfigError("evolve: initial state dimension does not match the level scheme");
  }

  Trajectory traj;
  double dt_max = options.dt_max;
  if (!(dt_max > 0.0)) {
    const double scale = max_rate_scale(config, sequence);
    dt_max = scale > 0.0 ? 1.0 / (50.0 * scale) : sequence.duration();
  }
  traj.dt_max = dt_max;
  const std::size_t stride = std::max<std::size_t>(1, options.record_stride);

  State x(static_cast<std::size_t>(2 * n * n));
  view(x, n) = rho0.rho;
  double t = sequence.t_begin();
  traj.states.push_back(snapshot(x, n, t));

  double dt = dt_max;
  for (const auto& seg : sequence.segments()) {
    const LindbladGenerator gen = segment_generator(config, seg);
    Eigen::MatrixXcd scratch(n, n);
    auto system = [&](const State& in, State& out, double /*t*/) {
      gen.apply(Eigen::MatrixXcd(view(in, n)), scratch);
      view(out, n) = scratch;
    };
    auto stepper = odeint::make_controlled(options.abs_tol, options.rel_tol, dt_max,
                                           odeint::runge_kutta_dopri5<State>());
    const double min_dt = 1e-14 * std::max(seg.duration(), std::abs(seg.t_end));
    t = seg.t_start;
    while (t < seg.t_end) {
      const bool last = t + dt >= seg.t_end;
      double step = last ? seg.t_end - t : dt;
      const auto result = stepper.try_step(system, x, t, step);
      if (result == odeint::fail) {
        ++traj.rejected_steps;
        dt = step;
        if (dt < min_dt) {
          std::ostringstream msg;
          msg << "evolve: step size underflow (dt=" << dt << " s) at t=" << t << " s in the "
              << to_string(seg.phase) << " segment; generator rate scale "
              << gen.rate_scale() << " rad/s";
          throw IntegrationError(msg.str());
        }
        continue;
      }
      ++traj.accepted_steps;
      if (last) t = seg.t_end;
      // Keep the controller's suggestion unless it came from a truncated step.
      dt = last ? std::max(dt, step) : step;
      dt = std::min(dt, dt_max);
      if (traj.accepted_steps % stride == 0 && t < seg.t_end) {
        traj.states.push_back(snapshot(x, n, t));
      }
    }
    traj.states.push_back(snapshot(x, n, seg.t_end));
  }
  return traj;
}

}  // namespace lss
