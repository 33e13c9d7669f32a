#include "icedrift/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include "icedrift/error.hpp"

namespace icedrift::io {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (v == 0.0) return "0";  // also folds -0 so outputs do not depend on its sign
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::Io, "cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw Error(ErrorCode::Io, "short write to " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

void write_track_csv(std::ostream& out, const Track& track) {
  out << "timestamp,lat,lon\n";
  for (const auto& f : track.fixes())
    out << format_iso8601(f.t) << ',' << format_double(f.lat) << ',' << format_double(f.lon)
        << '\n';
}

void write_series_csv(std::ostream& out, std::span<const UtcSeconds> times,
                      std::span<const double> values, std::string_view value_name) {
  if (times.size() != values.size())
    throw Error(ErrorCode::ShapeMismatch, "series times and values differ in length");
  out << "time_utc," << value_name << '\n';
  for (std::size_t i = 0; i < times.size(); ++i)
    out << format_iso8601(times[i]) << ',' << format_double(values[i]) << '\n';
}

Series parse_series_csv(std::string_view content) {
  Series s;
  std::size_t pos = 0, line_no = 0;
  bool header_seen = false;
  while (pos < content.size()) {
    std::size_t eol = content.find('\n', pos);
    if (eol == std::string_view::npos) eol = content.size();
    std::string_view line = content.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#' || line.front() == '%') continue;
    if (!header_seen) {
      header_seen = true;
      if (line.starts_with("time_utc,")) continue;
    }
    const auto comma = line.find(',');
    if (comma == std::string_view::npos || line.find(',', comma + 1) != std::string_view::npos)
      throw MalformedRecord(line_no, "expected time_utc,value");
    const auto t = parse_iso8601(line.substr(0, comma));
    const auto value = line.substr(comma + 1);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (!t || ec != std::errc{} || ptr != value.data() + value.size())
      throw MalformedRecord(line_no, "bad time or value");
    s.times.push_back(*t);
    s.values.push_back(v);
  }
  if (s.times.empty()) throw Error(ErrorCode::EmptyFile, "series file has no rows");
  return s;
}

}  // namespace icedrift::io
