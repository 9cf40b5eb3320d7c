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


#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>
#include <string>

#include <gtest/gtest.h>

#include "test_support.hpp"
#include "wayplan/datagen.hpp"
#include "wayplan/dataset.hpp"
#include "wayplan/error.hpp"
#include "wayplan/nl_bridge.hpp"
#include "wayplan/solver.hpp"

namespace wayplan {
namespace {

using testing::D;

TEST(GenRequest, DeterministicPerSeedAndIndex) {
  const GenParams a = testing::SmallGen(1);
  EXPECT_EQ(GenRequest(a, 17), GenRequest(a, 17));
  EXPECT_EQ(GenInventory(a, GenRequest(a, 17)), GenInventory(a, GenRequest(a, 17)));
  int same = 0;
  for (int i = 0; i < 20; ++i) same += GenRequest(a, i) == GenRequest(testing::SmallGen(2), i);
  EXPECT_LT(same, 2);
}

TEST(GenRequest, ShapeInvariants) {
  GenParams p = testing::SmallGen(3);
  int one_way = 0, three_city = 0;
  const int n = 2000;
  for (int i = 0; i < n; ++i) {
    const SymbolicRequest r = GenRequest(p, i);
    ASSERT_NO_THROW(ValidateRequest(r));
    ASSERT_EQ(r, Canonicalize(r));
    EXPECT_GE(r.legs.front().date, p.horizon_begin);
    EXPECT_LE(r.legs.back().date, p.horizon_end);
    if (r.trip_kind == TripKind::kOneWay) ++one_way;
    if (r.legs.size() == 3) ++three_city;
    for (std::size_t k = 1; k < r.legs.size(); ++k) {
      const int gap = r.legs[k].date - r.legs[k - 1].date;
      EXPECT_GE(gap, p.leg_gap_days.lo);
      EXPECT_LE(gap, p.leg_gap_days.hi);
    }
  }
  // Binomial counts within five standard deviations.
  auto near = [&](int count, double prob) {
    const double sd = std::sqrt(n * prob * (1 - prob));
    return std::abs(count - n * prob) <= 5 * sd + 1;
  };
  EXPECT_TRUE(near(one_way, p.one_way_fraction)) << one_way;
  EXPECT_TRUE(near(three_city, (1 - p.one_way_fraction) * p.three_city_fraction)) << three_city;
}

TEST(GenRequest, PresenceRates) {
  GenParams p = testing::SmallGen(4);
  const int n = 3000;
  std::map<std::string, int> present;
  for (int i = 0; i < n; ++i) {
    const SymbolicRequest r = GenRequest(p, i);
    present["price_total_max"] += r.airline.price_total_max.has_value();
    present["nonstop_only"] += r.airline.nonstop_only.has_value();
    present["departure_time"] += r.airline.departure_time.has_value();
    present["min_rating"] += r.hotel.min_rating.has_value();
    present["total_budget"] += r.budget.total_budget.has_value();
  }
  for (const auto& [field, prob] : PresenceTable(p.presence)) {
    auto it = present.find(field);
    if (it == present.end()) continue;
    const double sd = std::sqrt(n * prob * (1 - prob));
    EXPECT_NEAR(it->second, n * prob, 5 * sd) << field;
  }
}

TEST(GenInventory, PlantedFeasibilityAndSizes) {
  const GenParams p = testing::SmallGen(8);
  for (int i = 0; i < 150; ++i) {
    const SymbolicRequest r = GenRequest(p, i);
    const Inventory inv = GenInventory(p, r);
    ASSERT_NO_THROW(ValidateInventory(inv));
    for (const TripLeg& leg : r.legs) {
      int n = 0;
      for (const FlightOption& f : inv.flights) {
        n += f.origin == leg.origin && f.destination == leg.destination &&
             f.departure.date() == leg.date;
      }
      EXPECT_GE(n, p.flights_per_leg.lo);
      EXPECT_LE(n, p.flights_per_leg.hi);
    }
    for (const Stay& s : StaysOf(r)) {
      int n = 0;
      for (const HotelOption& h : inv.hotels) n += h.city == s.city;
      EXPECT_GE(n, p.hotels_per_city.lo);
      EXPECT_LE(n, p.hotels_per_city.hi);
    }
    const InstanceResult res = SolveInstance(r, inv);
    ASSERT_EQ(res.result.status, SolveStatus::kOptimal) << "instance " << i;
  }
}

TEST(GenParams, Validation) {
  GenParams p;
  EXPECT_NO_THROW(ValidateGenParams(p));
  p.one_way_fraction = 1.5;
  EXPECT_THROW(ValidateGenParams(p), Error);
  p = {};
  p.city_pool = {"AAA", "BBB"};
  EXPECT_THROW(ValidateGenParams(p), Error);
  p = {};
  p.flights_per_leg = {5, 4};
  EXPECT_THROW(ValidateGenParams(p), Error);
}

TEST(Hotels, PerturbationKeepsMeanAndDiffers) {
  std::vector<HotelOption> base(4000, testing::Hotel("H", "ORD", 200, 40, D(2025, 1, 1),
                                                     D(2025, 12, 31)));
  const auto out = PerturbHotels(base, 0.15, 9);
  double sum = 0, sq = 0;
  for (const HotelOption& h : out) {
    const double x = h.price_per_night.AsDouble() / 20000.0;
    sum += x;
    sq += std::log(x) * std::log(x);
  }
  EXPECT_NEAR(sum / out.size(), 1.0, 0.01);
  EXPECT_NEAR(std::sqrt(sq / out.size()), 0.15, 0.01);
  EXPECT_EQ(PerturbHotels(base, 0.0, 9)[7].price_per_night, Cents::Dollars(200));
}

constexpr const char* kCsv =
    "legId,startingAirport,destinationAirport,segmentsDepartureTimeRaw,"
    "segmentsArrivalTimeRaw,totalFare,segmentsCabinCode,isBasicEconomy,isNonStop,"
    "segmentsAirlineName,segmentsEquipmentDescription,isRefundable\n"
    "a1,BOS,ORD,2022-04-17T08:00:00.000-04:00,2022-04-17T10:05:00.000-05:00,212.60,coach,"
    "False,True,Delta,Airbus A320,False\n"
    "a2,BOS,ORD,2022-04-18T06:00:00.000-04:00||2022-04-18T09:00:00.000-04:00,"
    "2022-04-18T08:00:00.000-04:00||2022-04-18T11:00:00.000-05:00,150,coach||business,"
    "True,False,United||United,Boeing 737||Boeing 757,False\n"
    "a3,ORD,BOS,2022-04-19T18:00:00.000-05:00,2022-04-19T21:30:00.000-04:00,99.99,"
    "premium,False,True,\"Jet, Blue\",Embraer 190,True\n";

TEST(Csv, WellFormedRows) {
  const BaseFlightTable t = IngestFlightCsvText(kCsv, DefaultColumnMap());
  ASSERT_EQ(t.rows.size(), 3u);
  EXPECT_EQ(t.skipped, 0);
  EXPECT_EQ(t.rows[0].price, Cents(21260));
  EXPECT_EQ(t.rows[0].departure.ToString(), "2022-04-17T08:00");
  EXPECT_TRUE(t.rows[0].is_nonstop);
  EXPECT_FALSE(t.rows[1].is_nonstop);
  EXPECT_TRUE(t.rows[1].is_mixed_cabin);
  EXPECT_TRUE(t.rows[1].is_basic_economy);
  EXPECT_EQ(t.rows[1].arrival.ToString(), "2022-04-18T11:00");
  EXPECT_EQ(t.rows[2].airline, "Jet, Blue");
  EXPECT_EQ(t.rows[2].cabin_class, CabinClass::kPremium);
  EXPECT_EQ(t.span_begin, D(2022, 4, 17));
  EXPECT_EQ(t.span_end, D(2022, 4, 19));
}

TEST(Csv, BadRowsAreSkippedWithReasons) {
  std::string text = kCsv;
  text += "a4,BOS,ORD,yesterday,2022-04-19T21:30:00,10,coach,False,True,X,Y,False\n";
  text += "a5,BOS,ORD,2022-04-19T18:00:00,2022-04-19T21:30:00,cheap,coach,False,True,X,Y,False\n";
  const BaseFlightTable t = IngestFlightCsvText(text, DefaultColumnMap());
  EXPECT_EQ(t.rows.size(), 3u);
  EXPECT_EQ(t.skipped, 2);
  ASSERT_EQ(t.skip_reasons.size(), 2u);
  EXPECT_EQ(t.skip_reasons[0].rfind("line 5:", 0), 0u);
}

TEST(Csv, MappingIncomplete) {
  ColumnMap m = DefaultColumnMap();
  m.erase("price");
  try {
    IngestFlightCsvText(kCsv, m);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kMappingIncomplete);
  }
  m = DefaultColumnMap();
  m["origin"] = "from";
  EXPECT_THROW(IngestFlightCsvText(kCsv, m), Error);
  EXPECT_THROW(ColumnMapFromJson(nlohmann::json::parse(R"({"colour":"x"})")), Error);
  EXPECT_EQ(ColumnMapFromJson(nlohmann::json::parse(R"({"price":"fare"})")).at("price"), "fare");
  EXPECT_THROW(IngestFlightCsv("/nonexistent/flights.csv", DefaultColumnMap()), Error);
}

TEST(Csv, ReplicateTilesWholeSpans) {
  const BaseFlightTable t = IngestFlightCsvText(kCsv, DefaultColumnMap());
  const BaseFlightTable r = ReplicateDates(t, D(2025, 1, 1), D(2025, 1, 30));
  EXPECT_EQ(r.rows.size(), 30u);
  for (const FlightOption& f : r.rows) {
    EXPECT_GE(f.departure.date(), D(2025, 1, 1));
    EXPECT_LE(f.departure.date(), D(2025, 1, 30));
    EXPECT_EQ((f.departure.date() - D(2022, 4, 17)) % 3 == 0, f.origin == "BOS" && f.is_nonstop);
  }
}

TEST(Csv, DecoysFromTableKeepPlantedFeasibility) {
  const BaseFlightTable t = IngestFlightCsvText(kCsv, DefaultColumnMap());
  GenParams p = testing::SmallGen(21);
  p.city_pool = {"BOS", "ORD", "DEN"};
  const BaseFlightTable tiled = ReplicateDates(t, p.horizon_begin, p.horizon_end + 10);
  p.base = &tiled;
  for (int i = 0; i < 30; ++i) {
    const SymbolicRequest r = GenRequest(p, i);
    EXPECT_EQ(SolveInstance(r, GenInventory(p, r)).result.status, SolveStatus::kOptimal);
  }
}

TEST(Dataset, JsonlRoundTrip) {
  GenParams p = testing::SmallGen(5);
  DatasetOptions o;
  o.count = 25;
  o.first_index = 100;
  const auto records = GenerateDataset(p, o);
  ASSERT_EQ(records.size(), 25u);
  EXPECT_EQ(records[0].id, "r000100");
  EXPECT_EQ(records[0].variant_seed, 100u);
  EXPECT_EQ(records[3].nl_text, RenderNl(records[3].request, 103));
  EXPECT_EQ(records[3].request, GenRequest(p, 103));
  const std::string text = RecordsToJsonl(records);
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 25);
  EXPECT_EQ(RecordsFromJsonl(text), records);
  EXPECT_EQ(RecordsToJsonl(RecordsFromJsonl(text)), text);

  const auto path = std::filesystem::temp_directory_path() / "wayplan_dataset_test.jsonl";
  WriteJsonl(path.string(), records);
  EXPECT_EQ(ReadJsonl(path.string()), records);
  std::filesystem::remove(path);
}

TEST(Dataset, ErrorsNameTheLine) {
  GenParams p = testing::SmallGen(5);
  DatasetOptions o;
  o.count = 2;
  std::string text = RecordsToJsonl(GenerateDataset(p, o));
  text += "\n{\"id\":\"x\"}\n";
  try {
    RecordsFromJsonl(text);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.path().rfind("line 4", 0), 0u) << e.path();
  }
  try {
    RecordsFromJsonl("{oops\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kMalformedJson);
  }
  EXPECT_THROW(ReadJsonl("/nonexistent/x.jsonl"), Error);
}

TEST(Dataset, DateSwapNoise) {
  GenParams p = testing::SmallGen(6);
  DatasetOptions o;
  o.count = 400;
  o.date_swap_fraction = 0.25;
  const auto noisy = GenerateDataset(p, o);
  int swapped = 0;
  for (const DatasetRecord& r : noisy) {
    if (r.nl_text != RenderNl(r.request, r.variant_seed)) {
      ++swapped;
      EXPECT_EQ(r.nl_text, RenderNl(SwapFirstLastDates(r.request), r.variant_seed));
    }
  }
  EXPECT_NEAR(swapped, 100, 30);
  o.date_swap_fraction = 1.5;
  EXPECT_THROW(GenerateDataset(p, o), Error);
}

TEST(Dataset, NoTextOption) {
  GenParams p = testing::SmallGen(6);
  DatasetOptions o;
  o.count = 3;
  o.render_text = false;
  const auto records = GenerateDataset(p, o);
  EXPECT_TRUE(records[0].nl_text.empty());
  EXPECT_FALSE(RecordToJson(records[0]).contains("nl_text"));
}

}  // namespace
}  // namespace wayplan
