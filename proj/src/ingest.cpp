#include "icedrift/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>

#include "icedrift/error.hpp"

namespace icedrift::ingest {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

bool parse_double(std::string_view s, double& out) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && ptr == s.data() + s.size();
}

bool parse_int(std::string_view s, int& out) {
  s = trim(s);
  if (s.empty()) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && ptr == s.data() + s.size();
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    std::size_t j = i;
    while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

std::vector<std::string_view> split_comma(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == ',') {
      out.push_back(trim(s.substr(start, i - start)));
      start = i + 1;
    }
  }
  return out;
}

bool is_csv_header(const std::vector<std::string_view>& fields) {
  static constexpr std::string_view names[] = {"timestamp", "timestamp_iso8601", "time",
                                               "time_utc", "datetime", "date"};
  const auto first = lower(fields.front());
  return std::find(std::begin(names), std::end(names), first) != std::end(names);
}

Fix make_fix(std::size_t line_no, UtcSeconds t, double lat, double lon) {
  try {
    return Fix::make(t, lat, lon);
  } catch (const Error& e) {
    throw MalformedRecord(line_no, e.what());
  }
}

Fix parse_csv_record(std::size_t line_no, const std::vector<std::string_view>& fields) {
  if (fields.size() != 3)
    throw MalformedRecord(line_no, "expected 3 comma-separated fields, got " +
                                       std::to_string(fields.size()));
  const auto t = parse_iso8601(fields[0]);
  if (!t) throw MalformedRecord(line_no, "bad timestamp '" + std::string(fields[0]) + "'");
  double lat = 0.0, lon = 0.0;
  if (!parse_double(fields[1], lat) || !parse_double(fields[2], lon))
    throw MalformedRecord(line_no, "bad coordinate");
  return make_fix(line_no, *t, lat, lon);
}

Fix parse_rawlocs_record(std::size_t line_no, const std::vector<std::string_view>& tokens,
                         DayOrigin origin) {
  if (tokens.size() < 4)
    throw MalformedRecord(line_no, "expected year, day, longitude, latitude");
  int year = 0;
  double day = 0.0, lon = 0.0, lat = 0.0;
  if (!parse_int(tokens[0], year) || year < 1900 || year > 9999)
    throw MalformedRecord(line_no, "bad year '" + std::string(tokens[0]) + "'");
  if (!parse_double(tokens[1], day) || !std::isfinite(day))
    throw MalformedRecord(line_no, "bad day of year '" + std::string(tokens[1]) + "'");
  if (!parse_double(tokens[2], lon) || !parse_double(tokens[3], lat))
    throw MalformedRecord(line_no, "bad coordinate");
  const double day0 = origin == DayOrigin::One ? 1.0 : 0.0;
  const UtcSeconds t = utc_from_civil(year, 1, 1) +
                       static_cast<UtcSeconds>(std::llround((day - day0) * 86400.0));
  return make_fix(line_no, t, lat, lon);
}

}  // namespace

std::vector<Fix> parse_locations(std::string_view content, const ParseOptions& options) {
  std::vector<Fix> fixes;
  bool seen_data_line = false;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= content.size()) {
    std::size_t eol = content.find('\n', pos);
    if (eol == std::string_view::npos) eol = content.size();
    std::string_view line = trim(content.substr(pos, eol - pos));
    pos = eol + 1;
    ++line_no;

    if (line_no == 1 && line.starts_with("\xEF\xBB\xBF")) line.remove_prefix(3);
    if (line.empty() || line.front() == '%' || line.front() == '#') continue;

    if (options.format == Format::GenericCsv) {
      const auto fields = split_comma(line);
      if (!seen_data_line && is_csv_header(fields)) {
        seen_data_line = true;
        continue;
      }
      fixes.push_back(parse_csv_record(line_no, fields));
    } else {
      const auto tokens = split_ws(line);
      if (!seen_data_line && lower(tokens.front()) == "year") {
        seen_data_line = true;
        continue;
      }
      fixes.push_back(parse_rawlocs_record(line_no, tokens, options.day_origin));
    }
    seen_data_line = true;
  }
  if (fixes.empty()) throw Error(ErrorCode::EmptyFile, "no location records found");
  return fixes;
}

std::vector<Fix> round_to_grid(const std::vector<Fix>& fixes) {
  std::vector<Fix> out;
  out.reserve(fixes.size());
  UtcSeconds best_distance = 0;
  for (std::size_t i = 0; i < fixes.size(); ++i) {
    if (i > 0 && fixes[i].t < fixes[i - 1].t)
      throw Error(ErrorCode::InvalidArgument, "round_to_grid needs time-sorted fixes");
    const UtcSeconds t = fixes[i].t;
    const UtcSeconds mark = (t + kGridStep / 2) / kGridStep * kGridStep;
    const UtcSeconds distance = t > mark ? t - mark : mark - t;
    Fix snapped{mark, fixes[i].lat, fixes[i].lon};
    if (!out.empty() && out.back().t == mark) {
      // Sorted input: an equal distance here means a later original time.
      if (distance < best_distance) {
        out.back() = snapped;
        best_distance = distance;
      }
    } else {
      out.push_back(snapped);
      best_distance = distance;
    }
  }
  return out;
}

Regularized regularize(const std::vector<Fix>& gridded, const std::string& id) {
  for (std::size_t i = 0; i < gridded.size(); ++i) {
    if (gridded[i].t % kGridStep != 0)
      throw Error(ErrorCode::InvalidArgument, "regularize needs fixes on half-hour marks");
    if (i > 0 && gridded[i].t <= gridded[i - 1].t)
      throw Error(ErrorCode::InvalidArgument, "regularize needs strictly increasing fixes");
  }

  std::vector<Fix> out;
  std::size_t interpolated = 0;
  std::optional<UtcSeconds> truncated_after;
  std::size_t dropped = 0;
  if (!gridded.empty()) out.push_back(gridded.front());

  for (std::size_t i = 1; i < gridded.size(); ++i) {
    const Fix& a = gridded[i - 1];
    const Fix& b = gridded[i];
    const UtcSeconds gap = b.t - a.t;
    if (gap > kMaxGap) {
      truncated_after = a.t;
      dropped = gridded.size() - i;
      break;
    }
    const double dlon = lon_delta(a.lon, b.lon);
    for (UtcSeconds t = a.t + kGridStep; t < b.t; t += kGridStep) {
      const double frac = static_cast<double>(t - a.t) / static_cast<double>(gap);
      out.push_back(Fix{t, a.lat + frac * (b.lat - a.lat), normalize_lon(a.lon + frac * dlon)});
      ++interpolated;
    }
    out.push_back(b);
  }

  if (out.size() < 2)
    throw Error(ErrorCode::TooShort, "track '" + id + "' keeps " + std::to_string(out.size()) +
                                         " fix(es) after pre-processing, need 2");
  return Regularized{Track(id, std::move(out)), interpolated, truncated_after, dropped};
}

EnsembleWindow align_tracks(const std::vector<Track>& tracks) {
  if (tracks.empty()) throw Error(ErrorCode::InvalidArgument, "align_tracks needs at least one track");
  UtcSeconds start = tracks.front().start();
  UtcSeconds end = tracks.front().end();
  for (const auto& t : tracks) {
    start = std::max(start, t.start());
    end = std::min(end, t.end());
  }
  if (end - start < kGridStep)
    throw Error(ErrorCode::NoOverlap, "tracks share fewer than two common grid instants");

  EnsembleWindow window{start, end, {}};
  window.slices.reserve(tracks.size());
  for (const auto& t : tracks) window.slices.push_back(t.slice(start, end));
  return window;
}

}  // namespace icedrift::ingest
