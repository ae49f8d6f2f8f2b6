#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "lss/storage/trace.hpp"

namespace lss {

// Trace CSV:
//   # sample_rate_hz=<v> t0_s=<v>
//   time_s,signal
//   <t>,<v>
//   ...
// Numbers are written in shortest round-trip form, so reading back yields
// bit-identical samples.
void write_trace_csv(std::ostream& out, const PhotodiodeTrace& trace);
void write_trace_csv(const std::filesystem::path& path, const PhotodiodeTrace& trace);

// Throws ParseError (with line number) on malformed or truncated input and
// IoError when the file cannot be opened.
PhotodiodeTrace read_trace_csv(std::istream& in, const std::string& source_name = "<stream>");
PhotodiodeTrace read_trace_csv(const std::filesystem::path& path);

}  // namespace lss
