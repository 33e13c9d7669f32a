#include "icedrift/time.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>

namespace icedrift {

namespace {

bool parse_fixed(std::string_view text, std::size_t pos, std::size_t len, int& out) {
  if (pos + len > text.size()) return false;
  for (std::size_t i = pos; i < pos + len; ++i)
    if (text[i] < '0' || text[i] > '9') return false;
  auto [ptr, ec] = std::from_chars(text.data() + pos, text.data() + pos + len, out);
  return ec == std::errc{} && ptr == text.data() + pos + len;
}

}  // namespace

UtcSeconds utc_from_civil(int year, unsigned month, unsigned day, int hour, int minute,
                          int second) {
  using namespace std::chrono;
  const sys_days date = year_month_day{std::chrono::year{year}, std::chrono::month{month},
                                       std::chrono::day{day}};
  return date.time_since_epoch().count() * UtcSeconds{86400} + hour * 3600 + minute * 60 +
         second;
}

std::optional<UtcSeconds> parse_iso8601(std::string_view s) {
  int year = 0, month = 0, day = 0, hour = 0, minute = 0, second = 0;
  if (!parse_fixed(s, 0, 4, year) || s.size() < 16 || s[4] != '-' || s[7] != '-' ||
      (s[10] != 'T' && s[10] != ' ') || s[13] != ':')
    return std::nullopt;
  if (!parse_fixed(s, 5, 2, month) || !parse_fixed(s, 8, 2, day) ||
      !parse_fixed(s, 11, 2, hour) || !parse_fixed(s, 14, 2, minute))
    return std::nullopt;

  std::size_t pos = 16;
  double frac = 0.0;
  if (pos < s.size() && s[pos] == ':') {
    if (!parse_fixed(s, pos + 1, 2, second)) return std::nullopt;
    pos += 3;
    if (pos < s.size() && s[pos] == '.') {
      std::size_t end = pos + 1;
      while (end < s.size() && s[end] >= '0' && s[end] <= '9') ++end;
      if (end == pos + 1) return std::nullopt;
      std::from_chars(s.data() + pos, s.data() + end, frac);
      pos = end;
    }
  }

  int offset_s = 0;
  if (pos < s.size()) {
    if (s[pos] == 'Z' || s[pos] == 'z') {
      ++pos;
    } else if (s[pos] == '+' || s[pos] == '-') {
      int oh = 0, om = 0;
      if (!parse_fixed(s, pos + 1, 2, oh)) return std::nullopt;
      std::size_t mpos = pos + 3;
      if (mpos < s.size() && s[mpos] == ':') ++mpos;
      if (!parse_fixed(s, mpos, 2, om)) return std::nullopt;
      offset_s = (oh * 3600 + om * 60) * (s[pos] == '-' ? -1 : 1);
      pos = mpos + 2;
    }
  }
  if (pos != s.size()) return std::nullopt;

  using namespace std::chrono;
  const year_month_day ymd{std::chrono::year{year}, std::chrono::month{unsigned(month)},
                           std::chrono::day{unsigned(day)}};
  if (!ymd.ok() || hour > 23 || minute > 59 || second > 60) return std::nullopt;

  return utc_from_civil(year, unsigned(month), unsigned(day), hour, minute, second) -
         offset_s + static_cast<UtcSeconds>(std::llround(frac));
}

std::string format_iso8601(UtcSeconds t) {
  using namespace std::chrono;
  const auto days_since = static_cast<long>(t >= 0 ? t / 86400 : (t - 86399) / 86400);
  const UtcSeconds sod = t - static_cast<UtcSeconds>(days_since) * 86400;
  const year_month_day ymd{sys_days{days{days_since}}};
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02dZ", int(ymd.year()),
                unsigned(ymd.month()), unsigned(ymd.day()), int(sod / 3600),
                int(sod % 3600 / 60), int(sod % 60));
  return buf;
}

}  // namespace icedrift
