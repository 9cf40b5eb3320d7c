// Copyright 2026 The Wayplan Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <gtest/gtest.h>

#include "test_support.hpp"
#include "wayplan/calendar.hpp"
#include "wayplan/error.hpp"
#include "wayplan/money.hpp"
#include "wayplan/request.hpp"

namespace wayplan {
namespace {

using testing::D;

TEST(Cents, DollarStrings) {
  EXPECT_EQ(Cents::Dollars(1383).ToDollarString(), "$1383");
  EXPECT_EQ(Cents(138350).ToDollarString(), "$1383.50");
  EXPECT_EQ(Cents(5).ToDollarString(), "$0.05");
  EXPECT_EQ(Cents::Dollars(3) + Cents(50), Cents(350));
  EXPECT_LT(Cents(1), Cents(2));
}

TEST(Cents, ParsePrefix) {
  auto p = ParseDollarPrefix("$317 per night");
  ASSERT_TRUE(p);
  EXPECT_EQ(p->first, Cents::Dollars(317));
  EXPECT_EQ(p->second, 4u);
  p = ParseDollarPrefix("$12.05");
  ASSERT_TRUE(p);
  EXPECT_EQ(p->first, Cents(1205));
  EXPECT_FALSE(ParseDollarPrefix("317"));
  EXPECT_FALSE(ParseDollarPrefix("$"));
}

TEST(Rating, TenthsOnly) {
  ASSERT_TRUE(Rating::FromDouble(4.5));
  EXPECT_EQ(Rating::FromDouble(4.5)->tenths(), 45);
  EXPECT_FALSE(Rating::FromDouble(4.55));
  EXPECT_FALSE(Rating::FromDouble(5.1));
  EXPECT_EQ(Rating(40).ToString(), "4");
  EXPECT_EQ(Rating(45).ToString(), "4.5");
}

TEST(Calendar, DatesRoundTrip) {
  const Date d = D(2024, 2, 29);
  EXPECT_EQ(d.ToString(), "2024-02-29");
  EXPECT_EQ(Date::Parse("2024-02-29"), d);
  EXPECT_FALSE(Date::Parse("2025-02-29"));
  EXPECT_FALSE(Date::Parse("2025-2-01"));
  EXPECT_EQ((d + 1).ToString(), "2024-03-01");
  EXPECT_EQ(D(2025, 1, 1) - D(2024, 1, 1), 366);
}

TEST(Calendar, DateTimes) {
  auto t = DateTime::Parse("2025-01-15T23:45");
  ASSERT_TRUE(t);
  EXPECT_EQ(t->date(), D(2025, 1, 15));
  EXPECT_EQ(t->minute_of_day(), 23 * 60 + 45);
  EXPECT_EQ(DateTime::Parse("2025-01-15 23:45:10"), t);
  EXPECT_EQ(t->ToString(), "2025-01-15T23:45");
  EXPECT_EQ((*t + 30).ToString(), "2025-01-16T00:15");
  EXPECT_FALSE(DateTime::Parse("2025-01-15T24:10"));
}

TEST(Calendar, TimeOfDay) {
  EXPECT_EQ(ParseTimeOfDay("08:30"), 510);
  EXPECT_EQ(ParseTimeOfDay("24:00"), 1440);
  EXPECT_FALSE(ParseTimeOfDay("24:01"));
  EXPECT_EQ(FormatTimeOfDay(510), "08:30");
  EXPECT_TRUE((TimeWindow{480, 600}).Contains(480));
  EXPECT_FALSE((TimeWindow{480, 600}).Contains(600));
  EXPECT_FALSE((TimeWindow{600, 600}).IsValid());
}

TEST(Request, JsonRoundTrip) {
  SymbolicRequest r = testing::DemoRequest();
  r.airline.departure_time = std::vector<LegWindow>{{2, {360, 720}}, {0, {480, 1440}}};
  r.hotel.brands = std::vector<std::string>{"Marriott", "Hilton", "Hilton"};
  r.hotel.min_rating = Rating(35);
  r.budget.total_budget = Cents::Dollars(3000);
  const std::string wire = SerializeRequest(r);
  const SymbolicRequest back = ParseRequest(wire);
  EXPECT_EQ(back, Canonicalize(r));
  EXPECT_EQ(SerializeRequest(back), wire);
  // Brands are a sorted set; windows are ordered by leg.
  EXPECT_EQ(back.hotel.brands->size(), 2u);
  EXPECT_EQ(back.airline.departure_time->front().leg, 0);
}

TEST(Request, WireFormat) {
  const auto j = RequestToJson(testing::DemoRequest());
  EXPECT_EQ(j["trip_kind"], "round_trip");
  EXPECT_EQ(j["airline"]["price_total_max"], 138300);
  EXPECT_EQ(j["legs"][1]["origin"], "MIA");
  EXPECT_FALSE(j.contains("budget"));
}

TEST(Request, TripKindInferredFromLegs) {
  const auto r = ParseRequest(
      R"({"legs":[{"date":"2025-05-01","origin":"SEA","destination":"SFO"}]})");
  EXPECT_EQ(r.trip_kind, TripKind::kOneWay);
}

void ExpectError(const std::string& text, ErrorCode code, const std::string& path) {
  try {
    ParseRequest(text);
    FAIL() << "accepted " << text;
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), code) << e.what();
    EXPECT_EQ(e.path(), path) << e.what();
  }
}

TEST(Request, Rejections) {
  const std::string leg = R"({"date":"2025-05-01","origin":"SEA","destination":"SFO"})";
  ExpectError("{", ErrorCode::kMalformedJson, "");
  ExpectError(R"({"legs":[)" + leg + R"(],"color":1})", ErrorCode::kSchemaViolation, "/color");
  ExpectError(R"({"legs":[]})", ErrorCode::kInvariantViolation, "legs");
  ExpectError(R"({"legs":[)" + leg + "," + leg + "]}", ErrorCode::kInvariantViolation,
              "legs[1].origin");
  ExpectError(R"({"legs":[)" + leg + R"(],"airline":{"price_total_max":-1}})",
              ErrorCode::kInvariantViolation, "airline.price_total_max");
  ExpectError(R"({"legs":[)" + leg + R"(],"hotel":{"brands":[]}})",
              ErrorCode::kInvariantViolation, "hotel.brands");
  ExpectError(R"({"trip_kind":"round_trip","legs":[)" + leg + "]}",
              ErrorCode::kInvariantViolation, "trip_kind");
  ExpectError(R"({"legs":[)" + leg + R"(],"airline":{"departure_time":[{"leg":2,"start":"08:00","end":"09:00"}]}})",
              ErrorCode::kInvariantViolation, "airline.departure_time[0]");
}

TEST(Request, ExactMatchNamesFields) {
  SymbolicRequest a = testing::DemoRequest();
  SymbolicRequest b = a;
  EXPECT_TRUE(ExactMatch(a, b).is_match);
  b.airline.nonstop_only.reset();
  b.legs[1].date = b.legs[1].date + 0;
  b.hotel.total_budget_max = Cents::Dollars(951);
  const MatchResult m = ExactMatch(a, b);
  EXPECT_FALSE(m.is_match);
  EXPECT_EQ(m.mismatched_fields,
            (std::vector<std::string>{"airline.nonstop_only", "hotel.total_budget_max"}));
}

TEST(Request, StaysAndCities) {
  const SymbolicRequest r = testing::DemoRequest();
  const auto stays = StaysOf(r);
  ASSERT_EQ(stays.size(), 2u);
  EXPECT_EQ(stays[0].city, "MIA");
  EXPECT_EQ(stays[0].nights(), 2);
  EXPECT_EQ(stays[1].nights(), 1);
  EXPECT_EQ(CitiesOf(r), (std::vector<std::string>{"DEN", "MIA", "JFK"}));
  EXPECT_EQ(CountAirlineConstraints(r.airline), 5);
  EXPECT_EQ(CountHotelConstraints(r.hotel), 2);
}

}  // namespace
}  // namespace wayplan
