#pragma once

#include <string>

namespace lss {

// Shortest decimal text that parses back to exactly the same double; "inf",
// "-inf" and "nan" for non-finite values.
std::string fmt_exact(double v);

// Parses text written by fmt_exact (or any ordinary decimal). Throws
// std::invalid_argument when the whole string is not a number.
double parse_double(const std::string& text);

}  // namespace lss
