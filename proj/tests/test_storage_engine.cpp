#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <filesystem>
#include <sstream>

#include "lss/analysis/beat_fit.hpp"
#include "lss/errors.hpp"
#include "lss/storage/polariton.hpp"
#include "lss/storage/synthesis.hpp"
#include "lss/storage/trace.hpp"
#include "lss/storage/trace_io.hpp"
#include "oracles.hpp"

using namespace lss;
using oracle::kPi;

namespace {

ExperimentConfig noiseless() {
  auto c = default_config();
  c.trace_noise_sigma = 0.0;
  return c;
}

// Frequency of the largest |DFT| on a fine brute-force grid, no FFT involved.
double dft_peak(const PhotodiodeTrace& t, double t_a, double t_b, double f_lo, double f_hi,
                double df) {
  const auto [first, last] = t.index_range(t_a, t_b);
  double mean = 0.0;
  for (std::size_t i = first; i < last; ++i) mean += t.samples[i];
  mean /= static_cast<double>(last - first);
  double best_f = f_lo, best = -1.0;
  for (double f = f_lo; f <= f_hi; f += df) {
    std::complex<double> acc = 0.0;
    for (std::size_t i = first; i < last; ++i) {
      acc += (t.samples[i] - mean) * std::polar(1.0, -2.0 * kPi * f * t.time_at(i));
    }
    if (std::abs(acc) > best) {
      best = std::abs(acc);
      best_f = f;
    }
  }
  return best_f;
}

}  // namespace

TEST_CASE("mixing angle limits") {
  CHECK(mixing_angle(1e9, 1.0, 1e30) < 1e-20);
  CHECK(mixing_angle(1e9, 1.0, 0.0) == doctest::Approx(kPi / 2));
  CHECK(mixing_angle(2.0, 4.0, 4.0) == doctest::Approx(kPi / 4));
  CHECK_THROWS_AS(mixing_angle(0.0, 1.0, 0.0), std::domain_error);
  CHECK_THROWS_AS(mixing_angle(1.0, 1.0, -1.0), std::domain_error);
  oracle::Gen gen(31);
  for (int k = 0; k < 200; ++k) {
    const double th = mixing_angle(gen.log_uniform(1e-3, 1e10), 1.0, gen.log_uniform(1e-3, 1e10));
    CHECK(th >= 0.0);
    CHECK(th <= kPi / 2);
  }
}

TEST_CASE("polariton normalisation survives rotations") {
  oracle::Gen gen(32);
  auto p = PolaritonState::from_angle(0.1, 1.0, 0.3);
  for (int k = 0; k < 500; ++k) {
    p = p.rotated_to(gen.uniform(0.0, kPi / 2));
    CHECK(p.normalization_error() < 1e-12);
    CHECK(p.stored_amplitude == 1.0);
    CHECK(p.stored_phase == 0.3);
  }
}

TEST_CASE("frequency pulling") {
  CHECK(frequency_pulling(5e3, 0.0, 0.3) == 0.0);
  CHECK(std::abs(frequency_pulling(5e3, 0.7, kPi / 2)) < 1e-25);
  CHECK(frequency_pulling(5e3, kPi, 0.0) == doctest::Approx(10e3));
  const double direct = frequency_pulling(10e3, 0.01, kPi / 4);
  const double series = 10e3 * 0.01 * 0.01 / 4.0;
  CHECK(direct == doctest::Approx(0.25).epsilon(1e-4));
  CHECK(direct == doctest::Approx(series).epsilon(1e-4));
}

TEST_CASE("retrieved beat frequency") {
  const auto c = default_config();
  const double z = c.magnetic.zeeman_splitting();
  CHECK(retrieved_beat_frequency(c.magnetic, 0.0, c.light_shift, 0.0, 0.3, 8e3) == z);
  CHECK(retrieved_beat_frequency(c.magnetic, c.control.intensity, c.light_shift, 0.0, 0.3, 0.0) ==
        doctest::Approx(z + 7000.0).epsilon(1e-12));
  oracle::Gen gen(33);
  const double ref = retrieved_beat_frequency(c.magnetic, 3.0, c.light_shift, 0.0, 0.5, 0.0);
  for (int k = 0; k < 100; ++k) {
    CHECK(retrieved_beat_frequency(c.magnetic, 3.0, c.light_shift, 0.0, 0.5,
                                   gen.uniform(-1e5, 1e5)) == ref);
  }
}

TEST_CASE("storage round trip") {
  CHECK(storage_round_trip(0.3, kPi / 2, 1.0).amplitude == 0.0);
  CHECK(storage_round_trip(0.4, 0.4, 2.5).amplitude == doctest::Approx(2.5).epsilon(1e-14));
  const auto a = storage_round_trip(0.2, 0.5, 1.0, 0.3, 1.1);
  const auto b2 = storage_round_trip(0.2, 0.5, 2.0, 0.3, 1.1);
  CHECK(b2.amplitude == doctest::Approx(2.0 * a.amplitude).epsilon(1e-15));
  CHECK(a.phase == 1.1);
  CHECK(a.amplitude == doctest::Approx(std::sqrt(0.3) * std::cos(0.5) / std::cos(0.2)));
  CHECK_THROWS_AS(storage_round_trip(kPi / 2, 0.1, 1.0), std::domain_error);
  CHECK_THROWS_AS(storage_round_trip(0.1, 0.1, -1.0), std::domain_error);
}

TEST_CASE("retrieved beat does not depend on the signal intensity") {
  const auto c = default_config();
  const auto seq = c.pulse_sequence();
  const auto base = storage_beats(c, seq);
  const auto more = storage_beats(c.with_signal_intensity(4.0 * c.signal.intensity), seq);
  CHECK(more.f_retrieved == base.f_retrieved);
  CHECK(more.retrieved_amplitude == doctest::Approx(2.0 * base.retrieved_amplitude).epsilon(1e-14));
}

TEST_CASE("synthesised trace segments") {
  const auto c = noiseless();
  const auto seq = c.pulse_sequence();
  const auto t = simulate_storage(c, seq);
  const auto b = storage_beats(c, seq);
  CHECK(t.size() == static_cast<std::size_t>(std::llround(seq.duration() * c.sample_rate)));
  CHECK(t.phase_markers.size() == 4);
  for (double v : t.samples) CHECK(std::isfinite(v));

  const auto& st = seq.phase(Phase::storage);
  auto [s0, s1] = t.index_range(st.t_start + 1e-7, st.t_end - 1e-7);
  for (auto i = s0; i < s1; ++i) CHECK(t.samples[i] == 0.0);

  const auto& pr = seq.phase(Phase::preparation);
  auto [p0, p1] = t.index_range(pr.t_start, pr.t_end - 1e-7);
  for (auto i = p0; i < p1; ++i) {
    CHECK(t.samples[i] == doctest::Approx(c.control_leak_fraction * c.control.intensity));
  }

  // Input amplitude 2 sqrt(I_S leak I_C) around I_S + leak I_C.
  const double amp = 2.0 * std::sqrt(c.signal.intensity * c.control_leak_fraction * c.control.intensity);
  const auto& in = seq.phase(Phase::input);
  auto [i0, i1] = t.index_range(in.t_start, in.t_end - 1e-7);
  double hi = -1e9, lo = 1e9;
  for (auto i = i0; i < i1; ++i) {
    hi = std::max(hi, t.samples[i]);
    lo = std::min(lo, t.samples[i]);
  }
  CHECK(0.5 * (hi - lo) == doctest::Approx(amp).epsilon(1e-3));
  CHECK(b.input_amplitude == doctest::Approx(amp));
}

TEST_CASE("nothing stored leaves a flat readout") {
  auto c = noiseless();
  c.storage_efficiency = 0.0;
  const auto seq = c.pulse_sequence();
  const auto t = simulate_storage(c, seq);
  const auto& rd = seq.phase(Phase::readout);
  auto [r0, r1] = t.index_range(rd.t_start + 1e-7, rd.t_end);
  for (auto i = r0; i < r1; ++i) {
    CHECK(t.samples[i] == doctest::Approx(c.control_leak_fraction * c.control.intensity));
  }
}

TEST_CASE("two beat epochs at the expected frequencies") {
  auto c = default_config();
  c.delta_r = 4e3;
  const auto seq = c.pulse_sequence();
  const auto t = simulate_storage(c, seq);
  const auto& in = seq.phase(Phase::input);
  const auto& rd = seq.phase(Phase::readout);
  const double f_in = dft_peak(t, in.t_start, in.t_end, 650e3, 720e3, 100.0);
  CHECK(f_in == doctest::Approx(685815.76 + 4e3).epsilon(5e-4));
  const double f_rd = dft_peak(t, rd.t_start, rd.t_end, 650e3, 720e3, 100.0);
  CHECK(f_rd == doctest::Approx(685815.76 + 7e3).epsilon(2e-3));
  CHECK(seq.phase(Phase::storage).duration() == doctest::Approx(5e-6));
}

TEST_CASE("noiseless resonance: input and retrieved beats agree") {
  auto c = noiseless();
  c.light_shift.couplings.clear();
  const auto seq = c.pulse_sequence();
  const auto t = simulate_storage(c, seq);
  const auto& in = seq.phase(Phase::input);
  const auto& rd = seq.phase(Phase::readout);
  const auto fi = fit_beat(t, {in.t_start + 2e-6, in.t_end});
  BeatFitOptions opt;
  opt.envelope = true;
  const auto fr = fit_beat(t, {rd.t_start + 2e-6, rd.t_end}, opt);
  CHECK(fi.f_b.value == doctest::Approx(c.magnetic.zeeman_splitting()).epsilon(1e-10));
  CHECK(fr.f_b.value == doctest::Approx(fi.f_b.value).epsilon(1e-10));
  CHECK(fr.envelope_decay_time.value == doctest::Approx(c.retrieval_decay_time).epsilon(1e-8));
}

TEST_CASE("traces are reproducible from the seed") {
  const auto c = default_config();
  const auto seq = c.pulse_sequence();
  const auto a = simulate_storage(c, seq);
  const auto b = simulate_storage(c, seq);
  CHECK(a.samples == b.samples);
  auto d = c;
  d.rng_seed = c.rng_seed + 1;
  CHECK(simulate_storage(d, seq).samples != a.samples);
}

TEST_CASE("synthesis preconditions") {
  auto c = default_config();
  c.sample_rate = 2e6;
  CHECK_THROWS_AS(simulate_storage(c, c.pulse_sequence()), ConfigError);
  c = default_config();
  const auto seq = PulseSequence::standard(20e-6, 50.05e-6, 5e-6, 40e-6);
  CHECK_THROWS_AS(simulate_storage(c, seq), ConfigError);
}

TEST_CASE("trace averaging and index ranges") {
  PhotodiodeTrace a{0.0, 10.0, {1.0, 2.0, 3.0}, {}};
  PhotodiodeTrace b{0.0, 10.0, {3.0, 4.0, 5.0}, {}};
  const std::vector<PhotodiodeTrace> v{a, b};
  CHECK(average_traces(v).samples == std::vector<double>{2.0, 3.0, 4.0});
  PhotodiodeTrace c{0.0, 10.0, {1.0}, {}};
  const std::vector<PhotodiodeTrace> bad{a, c};
  CHECK_THROWS_AS(average_traces(bad), ConfigError);

  const auto [f, l] = a.index_range(0.1, 0.25);
  CHECK(f == 1);
  CHECK(l == 3);
  CHECK(a.duration() == doctest::Approx(0.3));
}

TEST_CASE("trace csv round trip is exact") {
  const auto c = default_config();
  const auto t = simulate_storage(c, c.pulse_sequence());
  std::stringstream io;
  write_trace_csv(io, t);
  const std::string text = io.str();
  CHECK(text.rfind("# sample_rate_hz=1e+07 t0_s=0\ntime_s,signal\n", 0) == 0);
  const auto back = read_trace_csv(io, "mem");
  CHECK(back.samples == t.samples);
  CHECK(back.sample_rate == t.sample_rate);
  CHECK(back.t0 == t.t0);

  const auto path = std::filesystem::temp_directory_path() / "lss_trace_roundtrip.csv";
  write_trace_csv(path, t);
  CHECK(read_trace_csv(path).samples == t.samples);
  std::filesystem::remove(path);
}

TEST_CASE("trace csv parse errors carry line numbers") {
  auto parse = [](const std::string& s) {
    std::istringstream in(s);
    return read_trace_csv(in, "t.csv");
  };
  auto line_of = [&](const std::string& s) -> std::size_t {
    try {
      parse(s);
    } catch (const ParseError& e) {
      return e.line();
    }
    return 0;
  };
  const std::string head = "# sample_rate_hz=10 t0_s=0\ntime_s,signal\n";
  CHECK(parse(head + "0,1\n0.1,2\n").samples.size() == 2);
  CHECK(line_of(head + "0,1\n0.1,2") == 4);  // truncated final record
  CHECK(line_of("time_s,signal\n0,1\n") == 1);
  CHECK(line_of(head + "0,1\n0.1\n") == 4);
  CHECK(line_of(head + "0,1\n0.1,abc\n") == 4);
  CHECK(line_of(head + "0,1\n0.5,2\n") == 4);
  CHECK(line_of(head) > 0);
  CHECK(line_of("") == 1);
  CHECK_THROWS_AS(read_trace_csv(std::filesystem::path("/nonexistent/x.csv")), IoError);
}
