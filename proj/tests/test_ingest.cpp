#include <doctest.h>

#include <algorithm>
#include <random>

#include "icedrift/error.hpp"
#include "icedrift/ingest.hpp"

using namespace icedrift;
using namespace icedrift::ingest;

namespace {

// 2019-10-01T00:00:00Z, from calendar.timegm.
constexpr UtcSeconds kOct1 = 1569888000;

Fix at(UtcSeconds t, double lat = 80.0, double lon = 10.0) { return Fix{t, lat, lon}; }

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an icedrift::Error");
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_SUITE("parse_locations") {
  TEST_CASE("GenericCsv record converts to epoch seconds") {
    const auto fixes = parse_locations("2019-10-01T00:30:00Z,85.0,120.0\n");
    REQUIRE(fixes.size() == 1);
    CHECK(fixes[0].t == 1569889800);  // calendar.timegm((2019,10,1,0,30,0))
    CHECK(fixes[0].lat == 85.0);
    CHECK(fixes[0].lon == 120.0);
  }

  TEST_CASE("RawLocs day 1.0 is Jan 1 midnight") {
    const auto fixes = parse_locations("2020 1.0 -150.0 75.0\n", {Format::RawLocs});
    REQUIRE(fixes.size() == 1);
    CHECK(fixes[0].t == 1577836800);  // calendar.timegm((2020,1,1,0,0,0))
    CHECK(fixes[0].lat == 75.0);
    CHECK(fixes[0].lon == -150.0);
  }

  TEST_CASE("RawLocs zero day origin") {
    const auto fixes =
        parse_locations("2020 0.5 10 80\n", {Format::RawLocs, DayOrigin::Zero});
    CHECK(fixes[0].t == 1577836800 + 43200);
  }

  TEST_CASE("fractional days round to the nearest second") {
    const auto fixes = parse_locations("2020 1.0208333 10 80\n", {Format::RawLocs});
    CHECK(fixes[0].t == 1577836800 + 1800);
  }

  TEST_CASE("comments, blanks and header rows are skipped") {
    const auto raw = parse_locations(
        "% year day lon lat\n\n# note\n2020 1.0 10 80\n2020 1.5 11 80\n", {Format::RawLocs});
    CHECK(raw.size() == 2);

    const auto csv = parse_locations(
        "timestamp,lat,lon\r\n2019-10-01T00:30:00Z,85,120\r\n2019-10-01T01:00:00Z,85,121\r\n");
    CHECK(csv.size() == 2);

    const auto raw_header = parse_locations("year day lon lat\n2020 1.0 10 80\n", {Format::RawLocs});
    CHECK(raw_header.size() == 1);
  }

  TEST_CASE("a comment line alone yields EmptyFile") {
    CHECK(code_of([] { parse_locations("% year day lon lat\n", {Format::RawLocs}); }) ==
          ErrorCode::EmptyFile);
    CHECK(code_of([] { parse_locations(""); }) == ErrorCode::EmptyFile);
  }

  TEST_CASE("an unparseable line fails the whole file with its line number") {
    const std::string content = "2020 1.0 10 80\n2020 1.1 abc 80\n2020 1.2 10 80\n";
    try {
      parse_locations(content, {Format::RawLocs});
      FAIL("should have thrown");
    } catch (const MalformedRecord& e) {
      CHECK(e.line_no() == 2);
      CHECK(e.code() == ErrorCode::MalformedRecord);
    }
  }

  TEST_CASE("out-of-range latitude and wrong field counts are malformed") {
    CHECK(code_of([] { parse_locations("2019-10-01T00:30:00Z,95.0,120.0\n"); }) ==
          ErrorCode::MalformedRecord);
    CHECK(code_of([] { parse_locations("2019-10-01T00:30:00Z,85.0\n"); }) ==
          ErrorCode::MalformedRecord);
    CHECK(code_of([] { parse_locations("2019-13-01T00:30:00Z,85.0,1\n"); }) ==
          ErrorCode::MalformedRecord);
    CHECK(code_of([] { parse_locations("2020 1.0 10\n", {Format::RawLocs}); }) ==
          ErrorCode::MalformedRecord);
  }

  TEST_CASE("longitudes are normalized into (-180, 180]") {
    const auto fixes = parse_locations("2019-10-01T00:30:00Z,70,190\n2019-10-01T01:00:00Z,70,-180\n");
    CHECK(fixes[0].lon == doctest::Approx(-170.0));
    CHECK(fixes[1].lon == 180.0);
  }

  TEST_CASE("timezone offsets are applied") {
    const auto fixes = parse_locations("2019-10-01T02:30:00+02:00,70,10\n");
    CHECK(fixes[0].t == 1569889800);
  }
}

TEST_SUITE("round_to_grid") {
  TEST_CASE("nearest mark, ties round up") {
    const UtcSeconds noon = kOct1 + 12 * 3600;
    CHECK(round_to_grid({at(noon + 14 * 60)})[0].t == noon);
    CHECK(round_to_grid({at(noon + 15 * 60)})[0].t == noon + 1800);
  }

  TEST_CASE("collisions keep the closest original") {
    const UtcSeconds noon = kOct1 + 12 * 3600;
    auto out = round_to_grid({at(noon + 600, 1.0), at(noon + 1200, 2.0)});
    REQUIRE(out.size() == 2);
    CHECK(out[0].t == noon);
    CHECK(out[1].t == noon + 1800);

    out = round_to_grid({at(noon + 60, 1.0), at(noon + 300, 2.0)});
    REQUIRE(out.size() == 1);
    CHECK(out[0].lat == 1.0);

    // Equidistant on either side of the mark: the earlier original wins.
    out = round_to_grid({at(noon - 120, 1.0), at(noon + 120, 2.0)});
    REQUIRE(out.size() == 1);
    CHECK(out[0].lat == 1.0);
  }

  TEST_CASE("empty in, empty out") { CHECK(round_to_grid({}).empty()); }

  TEST_CASE("property: idempotent and strictly increasing") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 200; ++trial) {
      std::uniform_int_distribution<UtcSeconds> dt(0, 4 * 3600);
      std::vector<Fix> fixes;
      UtcSeconds t = kOct1 + dt(rng);
      const int n = 1 + static_cast<int>(rng() % 60);
      for (int i = 0; i < n; ++i) {
        fixes.push_back(at(t, 70.0 + i * 0.01));
        t += dt(rng) / 4;
      }
      const auto once = round_to_grid(fixes);
      CHECK(round_to_grid(once) == once);
      for (std::size_t i = 0; i < once.size(); ++i) {
        CHECK(once[i].t % kGridStep == 0);
        if (i > 0) CHECK(once[i].t > once[i - 1].t);
      }
    }
  }
}

TEST_SUITE("regularize") {
  TEST_CASE("already uniform input is unchanged") {
    const std::vector<Fix> in{at(kOct1), at(kOct1 + 1800), at(kOct1 + 3600)};
    const auto r = regularize(in, "a");
    CHECK(r.track.size() == 3);
    CHECK(r.interpolated == 0);
    CHECK_FALSE(r.truncated_after.has_value());
    CHECK(std::equal(in.begin(), in.end(), r.track.fixes().begin()));
  }

  TEST_CASE("a 90 minute gap gains two interpolated fixes") {
    const auto r = regularize({at(kOct1, 80.0, 10.0), at(kOct1 + 5400, 80.2, 10.2)}, "a");
    REQUIRE(r.track.size() == 4);
    CHECK(r.interpolated == 2);
    CHECK(r.track[1].t == kOct1 + 1800);
    CHECK(r.track[1].lat == doctest::Approx(80.06666666666667).epsilon(1e-12));
    CHECK(r.track[1].lon == doctest::Approx(10.066666666666666).epsilon(1e-12));
    CHECK(r.track[2].lat == doctest::Approx(80.13333333333334).epsilon(1e-12));
    CHECK(r.track[2].lon == doctest::Approx(10.133333333333333).epsilon(1e-12));
  }

  TEST_CASE("a gap over 24 h truncates, leaving a lone fix -> TooShort") {
    CHECK(code_of([] { regularize({at(kOct1), at(kOct1 + 88200)}, "a"); }) == ErrorCode::TooShort);
  }

  TEST_CASE("a gap of exactly 24 h is filled") {
    const auto r = regularize({at(kOct1), at(kOct1 + kMaxGap)}, "a");
    CHECK(r.track.size() == 49);
    CHECK(r.interpolated == 47);
  }

  TEST_CASE("truncation keeps the prefix and reports it") {
    const auto r = regularize(
        {at(kOct1), at(kOct1 + 1800), at(kOct1 + 1800 + 90000), at(kOct1 + 1800 + 91800)}, "a");
    CHECK(r.track.size() == 2);
    REQUIRE(r.truncated_after.has_value());
    CHECK(*r.truncated_after == kOct1 + 1800);
    CHECK(r.dropped == 2);
  }

  TEST_CASE("longitude interpolation crosses the antimeridian on the short arc") {
    const auto r = regularize({at(kOct1, 80.0, 179.9), at(kOct1 + 3600, 80.0, -179.9)}, "a");
    CHECK(std::fabs(r.track[1].lon) == doctest::Approx(180.0));
  }

  TEST_CASE("empty input is TooShort") {
    CHECK(code_of([] { regularize({}, "a"); }) == ErrorCode::TooShort);
  }

  TEST_CASE("off-grid input is rejected") {
    CHECK(code_of([] { regularize({at(kOct1 + 5), at(kOct1 + 1805)}, "a"); }) ==
          ErrorCode::InvalidArgument);
  }

  TEST_CASE("property: random gap patterns yield a uniform, bounded track") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 300; ++trial) {
      std::vector<Fix> fixes;
      UtcSeconds t = kOct1;
      const int n = 2 + static_cast<int>(rng() % 40);
      std::optional<UtcSeconds> before_gap;
      for (int i = 0; i < n; ++i) {
        fixes.push_back(at(t, 70.0 + 0.01 * i, -170.0 + 0.3 * i));
        // Mostly short gaps, occasionally > 24 h.
        const UtcSeconds steps = rng() % 10 == 0 ? 49 + rng() % 20 : 1 + rng() % 12;
        if (!before_gap && steps * kGridStep > kMaxGap && i + 1 < n) before_gap = t;
        t += steps * kGridStep;
      }
      try {
        const auto r = regularize(fixes, "p");
        const auto& tr = r.track;
        for (std::size_t i = 0; i < tr.size(); ++i) CHECK(tr[i].t == tr.start() + UtcSeconds(i) * kGridStep);
        CHECK(tr.start() == fixes.front().t);
        if (before_gap) CHECK(tr.end() == *before_gap);
        else CHECK(tr.end() == fixes.back().t);
      } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::TooShort);
        CHECK(before_gap == fixes.front().t);
      }
    }
  }
}

TEST_SUITE("align_tracks") {
  Track grid_track(const std::string& id, UtcSeconds start, std::size_t n) {
    std::vector<Fix> fixes;
    for (std::size_t i = 0; i < n; ++i) fixes.push_back(at(start + UtcSeconds(i) * kGridStep));
    return Track(id, fixes);
  }

  TEST_CASE("identical tracks keep the full window") {
    const auto a = grid_track("a", kOct1, 5);
    const auto w = align_tracks({a, a});
    CHECK(w.start == a.start());
    CHECK(w.end == a.end());
    CHECK(w.length() == 5);
  }

  TEST_CASE("partial overlap intersects the spans") {
    const auto a = grid_track("a", kOct1, 21);               // 00:00..10:00
    const auto b = grid_track("b", kOct1 + 5 * 3600, 21);    // 05:00..15:00
    const auto w = align_tracks({a, b});
    CHECK(w.start == kOct1 + 5 * 3600);
    CHECK(w.end == kOct1 + 10 * 3600);
    REQUIRE(w.slices.size() == 2);
    CHECK(w.slices[0].size() == 11);
    CHECK(w.slices[1].size() == 11);
    for (std::size_t i = 0; i < 11; ++i) CHECK(w.slices[0][i].t == w.slices[1][i].t);
  }

  TEST_CASE("disjoint tracks -> NoOverlap") {
    const auto a = grid_track("a", kOct1, 3);
    const auto b = grid_track("b", kOct1 + 2 * 3600, 3);
    CHECK(code_of([&] { align_tracks({a, b}); }) == ErrorCode::NoOverlap);
  }

  TEST_CASE("a single shared instant is not enough") {
    const auto a = grid_track("a", kOct1, 3);
    const auto b = grid_track("b", kOct1 + 3600, 3);
    CHECK(code_of([&] { align_tracks({a, b}); }) == ErrorCode::NoOverlap);
  }
}
