#pragma once

#include <span>

namespace lss {

// Frequency (Hz) of the strongest periodogram peak of the linearly detrended
// samples. The FFT is zero-padded to at least `oversample` times the record
// length and the peak refined by parabolic interpolation of the magnitude.
// Frequencies below one record-length bin are ignored.
double dominant_frequency(std::span<const double> samples, double sample_rate, int oversample = 4);

}  // namespace lss
