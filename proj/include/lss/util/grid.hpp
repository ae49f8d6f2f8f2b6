#pragma once

#include <cstddef>
#include <vector>

namespace lss {

// n points from lo to hi inclusive.
std::vector<double> linspace(double lo, double hi, std::size_t n);

// n points on [-half_width, half_width] that are exactly mirror symmetric:
// grid[n-1-i] == -grid[i] bit for bit.
std::vector<double> symmetric_grid(double half_width, std::size_t n);

bool strictly_monotone(const std::vector<double>& v);

}  // namespace lss
