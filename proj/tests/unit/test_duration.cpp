// Copyright 2026 The Tempo Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "tempo/duration.hpp"

#include <catch2/catch_amalgamated.hpp>

#include "tempo/demos.hpp"

using namespace tempo;

TEST_CASE("parse_duration handles single terms") {
  CHECK(parse_duration("20 minutes").minutes() == 20);
  CHECK(parse_duration("1 minute").minutes() == 1);
  CHECK(parse_duration("2 hours").minutes() == 120);
  CHECK(parse_duration("1 day").minutes() == 1440);
  CHECK(parse_duration("0 minutes").minutes() == 0);
  CHECK(parse_duration("  45 MINUTES  ").minutes() == 45);
}

TEST_CASE("parse_duration handles compounds") {
  CHECK(parse_duration("1 hour 30 minutes").minutes() == 90);
  CHECK(parse_duration("1 day 2 hours").minutes() == 1560);
  CHECK(parse_duration("1 day 1 hour 1 minute").minutes() == 1501);
}

TEST_CASE("parse_duration handles quantity words") {
  CHECK(parse_duration("a day").minutes() == 1440);
  CHECK(parse_duration("an hour").minutes() == 60);
  CHECK(parse_duration("An Hour 30 minutes").minutes() == 90);
}

TEST_CASE("parse_duration floors seconds to whole minutes") {
  CHECK(parse_duration("30 seconds").minutes() == 0);
  CHECK(parse_duration("90 seconds").minutes() == 1);
  CHECK(parse_duration("1 minute 30 seconds").minutes() == 1);
}

TEST_CASE("parse_duration rejects bad input") {
  CHECK_THROWS_AS(parse_duration(""), std::invalid_argument);
  CHECK_THROWS_AS(parse_duration("   "), std::invalid_argument);
  CHECK_THROWS_AS(parse_duration("soon"), std::invalid_argument);
  CHECK_THROWS_AS(parse_duration("2 weeks"), std::invalid_argument);
  CHECK_THROWS_AS(parse_duration("3 months"), std::invalid_argument);
  CHECK_THROWS_AS(parse_duration("1.5 hours"), std::invalid_argument);
  CHECK_THROWS_AS(parse_duration("2-6 hours"), std::invalid_argument);
  CHECK_THROWS_AS(parse_duration("5"), std::invalid_argument);
  CHECK_THROWS_AS(parse_duration("30 minutes 1 hour"), std::invalid_argument);
  CHECK_THROWS_AS(parse_duration("1 hour 1 hour"), std::invalid_argument);
  CHECK(!try_parse_duration("later").has_value());
}

TEST_CASE("format_duration minutes_only") {
  CHECK(format_duration(TimeInterval(0), DurationStyle::minutes_only) == "0 minutes");
  CHECK(format_duration(TimeInterval(660), DurationStyle::minutes_only) == "660 minutes");
}

TEST_CASE("format_duration mixed humanizes largest unit first") {
  CHECK(format_duration(TimeInterval(480), DurationStyle::mixed) == "8 hours");
  CHECK(format_duration(TimeInterval(90), DurationStyle::mixed) == "1 hour 30 minutes");
  CHECK(format_duration(TimeInterval(1440), DurationStyle::mixed) == "1 day");
  CHECK(format_duration(TimeInterval(0), DurationStyle::mixed) == "0 minutes");
  CHECK(format_duration(TimeInterval(1), DurationStyle::mixed) == "1 minute");
  CHECK(format_duration(TimeInterval(1501), DurationStyle::mixed) == "1 day 1 hour 1 minute");
}

TEST_CASE("parse/format identity on 0..=10080, both styles") {
  for (long long m = 0; m <= 10080; ++m) {
    const TimeInterval i(m);
    REQUIRE(parse_duration(format_duration(i, DurationStyle::minutes_only)) == i);
    REQUIRE(parse_duration(format_duration(i, DurationStyle::mixed)) == i);
  }
}

TEST_CASE("extract_delay_marker") {
  CHECK(extract_delay_marker("[2 hours later]")->minutes() == 120);
  CHECK(extract_delay_marker("  [ 20 minutes   later ]  ")->minutes() == 20);
  CHECK(!extract_delay_marker("A: I finally got home.").has_value());
  CHECK(!extract_delay_marker("[Example]").has_value());
  CHECK(!extract_delay_marker("no brackets later").has_value());
  CHECK_THROWS_AS(extract_delay_marker("[later]"), std::invalid_argument);
  CHECK_THROWS_AS(extract_delay_marker("[sometime later]"), std::invalid_argument);
}

TEST_CASE("all demo-pool delay markers parse") {
  for (const std::string& demo : synth::builtin_demo_pool()) {
    bool found = false;
    for (std::string_view line : split_lines(demo)) {
      if (auto marker = extract_delay_marker(line)) {
        found = true;
        CHECK(marker->minutes() >= 1);
        CHECK(marker->minutes() <= 1440);
      }
    }
    CHECK(found);
  }
}

TEST_CASE("classify_interval is delayed strictly above zero") {
  CHECK(classify_interval(TimeInterval(0)) == Timing::instant);
  CHECK(classify_interval(TimeInterval(1)) == Timing::delayed);
  CHECK(classify_interval(TimeInterval(1440)) == Timing::delayed);
}

TEST_CASE("scan_duration finds expressions inside prose") {
  CHECK(scan_duration("The estimated time interval is: 2 hours")->minutes() == 120);
  CHECK(scan_duration("120 minutes")->minutes() == 120);
  CHECK(scan_duration("I think 1 hour 30 minutes, roughly.")->minutes() == 90);
  CHECK(scan_duration("about a day or so")->minutes() == 1440);
  CHECK(!scan_duration("sometime later").has_value());
  CHECK(!scan_duration("").has_value());
}
