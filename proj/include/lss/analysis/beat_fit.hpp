#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "lss/errors.hpp"
#include "lss/storage/trace.hpp"

namespace lss {

struct Estimate {
  double value = 0.0;
  double std_error = 0.0;
};

// V(t) = c0 + c1 t + A exp(-(t - t_a)/tau) sin(2 pi f t + phi)
struct BeatModel {
  double dc_offset = 0.0;  // c0
  double dc_slope = 0.0;   // c1, per second
  double amplitude = 0.0;  // A, at t = t_a
  double phase = 0.0;      // phi, rad, referred to t = 0
  double frequency = 0.0;  // Hz
  double envelope_decay_time = 0.0;  // tau, s; infinity for a flat envelope
  double t_ref = 0.0;                // t_a

  double operator()(double t) const;
};

struct BeatFitResult {
  Estimate f_b;
  Estimate amplitude;
  Estimate phase;  // wrapped to (-pi, pi]
  Estimate envelope_decay_time;  // infinity with zero error when the envelope is off
  Estimate dc_offset;
  Estimate dc_slope;
  double t_ref = 0.0;
  double rms_residual = 0.0;
  std::size_t n_samples = 0;
  bool converged = false;
  std::size_t n_iterations = 0;
  std::vector<std::string> warnings;

  BeatModel model() const;
};

struct FitWindow {
  double t_a = 0.0;
  double t_b = 0.0;
};

struct BeatFitOptions {
  std::optional<double> f_guess;  // Hz; periodogram seed when absent
  bool envelope = false;          // fit tau instead of fixing it at infinity
  std::size_t max_iterations = 200;
  double low_snr_factor = 3.0;    // A must exceed this many rms residuals
  int oversample = 4;
};

// Raised when the damped least-squares iteration does not converge. Carries
// the best iterate found.
class FitError : public NumericalError {
 public:
  FitError(const std::string& what, BeatFitResult best)
      : NumericalError(what), best_(std::move(best)) {}
  const BeatFitResult& best() const noexcept { return best_; }

 private:
  BeatFitResult best_;
};

class LowSnrError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

// Fits the beat model to the samples with t_a <= t < t_b. Standard errors
// come from s^2 (J^T J)^-1 at the optimum with s^2 = RSS / (N - p).
// Throws ConfigError for a window outside the trace or with too few samples,
// LowSnrError when the modulation is below the noise floor, FitError on
// non-convergence.
BeatFitResult fit_beat(const PhotodiodeTrace& trace, FitWindow window,
                       const BeatFitOptions& options = {});

}  // namespace lss
