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

#ifndef WAYPLAN_DATAGEN_HPP_
#define WAYPLAN_DATAGEN_HPP_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "wayplan/calendar.hpp"
#include "wayplan/inventory.hpp"
#include "wayplan/request.hpp"

namespace wayplan {

struct IntRange {
  int lo = 0;
  int hi = 0;  // inclusive
};

// Probability that each optional request field is present.
struct PresenceProbs {
  double price_total_max = 0.6;
  double cabin_class = 0.6;
  double refundable = 0.4;
  double nonstop_only = 0.6;
  double must_not_basic_economy = 0.5;
  double no_mixed_cabin = 0.4;
  double avoid_red_eye = 0.4;
  double departure_time = 0.35;
  double arrival_time = 0.25;
  double plane_types = 0.2;
  double preferred_airlines = 0.3;
  double daily_budget_max = 0.7;
  double total_budget_max = 0.6;
  double min_rating = 0.6;
  double brands = 0.4;
  double total_budget = 0.4;
  double everyday_budget = 0.3;
};

// Field name to probability, in schema order; used by reports and tests.
std::vector<std::pair<std::string, double>> PresenceTable(const PresenceProbs& p);

struct BaseFlightTable;

struct GenParams {
  std::uint64_t rng_seed = 0;
  double one_way_fraction = 0.04;
  double three_city_fraction = 0.3;
  std::vector<std::string> city_pool;  // empty means DefaultCityPool()
  Date horizon_begin = Date::FromYmd(2025, 1, 1);
  Date horizon_end = Date::FromYmd(2025, 12, 31);
  IntRange leg_gap_days{1, 3};
  IntRange flights_per_leg{4, 8};
  IntRange hotels_per_city{3, 6};
  PresenceProbs presence;
  // Boolean flags, when present, are true with this probability.
  double flag_true_probability = 0.8;
  double price_noise_sigma = 0.15;
  // Optional statistical base for decoy flights; not owned.
  const BaseFlightTable* base = nullptr;
};

const std::vector<std::string>& DefaultCityPool();
const std::vector<std::string>& AirlinePool();
const std::vector<std::string>& PlaneTypePool();
const std::vector<std::string>& HotelBrandPool();

void ValidateGenParams(const GenParams& params);

SymbolicRequest GenRequest(const GenParams& params, std::int64_t index);
Inventory GenInventory(const GenParams& params, const SymbolicRequest& request);

// FlightOption field name -> source column name.
using ColumnMap = std::map<std::string, std::string>;
// Column names of the public Expedia itineraries dump.
ColumnMap DefaultColumnMap();
ColumnMap ColumnMapFromJson(const nlohmann::json& j);

struct BaseFlightTable {
  std::vector<FlightOption> rows;
  Date span_begin;
  Date span_end;  // inclusive
  std::int64_t skipped = 0;
  std::vector<std::string> skip_reasons;  // "line N: reason", capped
};

BaseFlightTable IngestFlightCsv(const std::string& path, const ColumnMap& columns);
BaseFlightTable IngestFlightCsvText(std::string_view text, const ColumnMap& columns);

// Tiles the table across [begin, end] by whole multiples of its span.
BaseFlightTable ReplicateDates(const BaseFlightTable& table, Date begin, Date end);

std::vector<HotelOption> PerturbHotels(const std::vector<HotelOption>& hotels,
                                       double sigma, std::uint64_t seed);

}  // namespace wayplan

#endif  // WAYPLAN_DATAGEN_HPP_
