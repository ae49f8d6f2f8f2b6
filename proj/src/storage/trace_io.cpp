#include "lss/storage/trace_io.hpp"

#include <cmath>
#include <fstream>
#include <iterator>
#include <sstream>

#include "lss/errors.hpp"
#include "lss/util/format.hpp"

namespace lss {

void write_trace_csv(std::ostream& out, const PhotodiodeTrace& trace) {
  out << "# sample_rate_hz=" << fmt_exact(trace.sample_rate) << " t0_s=" << fmt_exact(trace.t0)
      << '\n';
  out << "time_s,signal\n";
  for (std::size_t i = 0; i < trace.size(); ++i) {
    out << fmt_exact(trace.time_at(i)) << ',' << fmt_exact(trace.samples[i]) << '\n';
  }
}

void write_trace_csv(const std::filesystem::path& path, const PhotodiodeTrace& trace) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  write_trace_csv(out, trace);
  if (!out) throw IoError("write failed: " + path.string());
}

namespace {

double header_value(const std::string& line, const std::string& key, const std::string& source) {
  const auto pos = line.find(key + "=");
  if (pos == std::string::npos) throw ParseError(source, 1, "header lacks " + key);
  const auto start = pos + key.size() + 1;
  const auto end = line.find_first_of(" \t\r", start);
  try {
    return parse_double(line.substr(start, end == std::string::npos ? end : end - start));
  } catch (const std::invalid_argument&) {
    throw ParseError(source, 1, "bad value for " + key);
  }
}

}  // namespace

PhotodiodeTrace read_trace_csv(std::istream& in, const std::string& source) {
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (text.empty()) throw ParseError(source, 1, "empty file");
  if (text.back() != '\n') {
    std::size_t lines = 1;
    for (char ch : text) lines += ch == '\n';
    throw ParseError(source, lines, "truncated record (missing line terminator)");
  }

  std::istringstream lines(text);
  std::string line;
  std::size_t line_no = 1;
  std::getline(lines, line);
  if (line.rfind("#", 0) != 0) throw ParseError(source, 1, "missing '# sample_rate_hz=... t0_s=...' header");

  PhotodiodeTrace trace;
  trace.sample_rate = header_value(line, "sample_rate_hz", source);
  trace.t0 = header_value(line, "t0_s", source);
  if (!(trace.sample_rate > 0.0) || !std::isfinite(trace.sample_rate) || !std::isfinite(trace.t0)) {
    throw ParseError(source, 1, "sample rate must be positive and t0 finite");
  }

  while (std::getline(lines, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) throw ParseError(source, line_no, "empty line");
    if (line == "time_s,signal") {
      if (!trace.samples.empty()) throw ParseError(source, line_no, "column header after data");
      continue;
    }
    const auto comma = line.find(',');
    if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos) {
      throw ParseError(source, line_no, "expected two comma-separated fields");
    }
    double t = 0.0;
    double v = 0.0;
    try {
      t = parse_double(line.substr(0, comma));
      v = parse_double(line.substr(comma + 1));
    } catch (const std::invalid_argument& e) {
      throw ParseError(source, line_no, e.what());
    }
    if (!std::isfinite(v)) throw ParseError(source, line_no, "non-finite sample");
    const double expected = trace.time_at(trace.samples.size());
    if (std::abs(t - expected) > 1e-3 / trace.sample_rate) {
      throw ParseError(source, line_no, "time stamp inconsistent with the header sample clock");
    }
    trace.samples.push_back(v);
  }
  if (trace.samples.empty()) throw ParseError(source, line_no, "no samples");
  return trace;
}

PhotodiodeTrace read_trace_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return read_trace_csv(in, path.string());
}

}  // namespace lss
