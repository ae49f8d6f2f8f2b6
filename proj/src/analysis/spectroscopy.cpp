#include "lss/analysis/spectroscopy.hpp"

#include <ostream>

#include "lss/util/format.hpp"

namespace lss {

std::size_t SpectroscopyResult::n_included() const {
  std::size_t n = 0;
  for (const auto& p : points) n += p.included ? 1 : 0;
  return n;
}

SpectroscopyResult analyze_spectroscopy(std::vector<SpectroscopyPoint> points) {
  SpectroscopyResult out;
  out.points = std::move(points);
  std::vector<double> x, y_in, s_in, y_ret, s_ret;
  for (const auto& p : out.points) {
    if (!p.included) continue;
    x.push_back(p.delta_r);
    y_in.push_back(p.f_input.value);
    s_in.push_back(p.f_input.std_error);
    y_ret.push_back(p.f_retrieved.value);
    s_ret.push_back(p.f_retrieved.std_error);
  }
  if (x.size() < 3) {
    throw NumericalError("spectroscopy: only " + std::to_string(x.size()) +
                         " points survived fitting, need 3");
  }
  out.input_fit = linear_fit(x, y_in, s_in);
  out.retrieved_fit = linear_fit(x, y_ret, s_ret);
  try {
    out.delta_f_ac = intersection(out.input_fit, out.retrieved_fit);
  } catch (const IllConditionedError& e) {
    out.delta_f_ac_note = e.what();
  }
  return out;
}

void write_fits_csv(std::ostream& out, const std::vector<FitRow>& rows) {
  out << "window_id,f_b_hz,f_b_err_hz,amplitude,tau_e_s,rms_residual,converged\n";
  for (const auto& r : rows) {
    out << r.window_id << ',' << fmt_exact(r.fit.f_b.value) << ',' << fmt_exact(r.fit.f_b.std_error)
        << ',' << fmt_exact(r.fit.amplitude.value) << ','
        << fmt_exact(r.fit.envelope_decay_time.value) << ',' << fmt_exact(r.fit.rms_residual)
        << ',' << (r.fit.converged ? 1 : 0) << '\n';
  }
}

}  // namespace lss
