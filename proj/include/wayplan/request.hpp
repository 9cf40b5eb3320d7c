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

#ifndef WAYPLAN_REQUEST_HPP_
#define WAYPLAN_REQUEST_HPP_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "wayplan/calendar.hpp"
#include "wayplan/money.hpp"

namespace wayplan {

enum class TripKind { kRoundTrip, kOneWay };
enum class CabinClass { kCoach, kPremium, kBusiness, kFirst };

std::string_view TripKindName(TripKind kind);
std::string_view CabinClassName(CabinClass cabin);
std::optional<CabinClass> ParseCabinClass(std::string_view name);

struct TripLeg {
  Date date;
  std::string origin;
  std::string destination;
  bool operator==(const TripLeg&) const = default;
};

// Soft time-of-day window attached to one leg (0-based index).
struct LegWindow {
  int leg = 0;
  TimeWindow window;
  bool operator==(const LegWindow&) const = default;
};

struct AirlineConstraints {
  std::optional<Cents> price_total_max;
  std::optional<CabinClass> cabin_class;
  std::optional<bool> refundable;
  std::optional<bool> nonstop_only;
  std::optional<bool> must_not_basic_economy;
  std::optional<bool> no_mixed_cabin;
  std::optional<bool> avoid_red_eye;
  std::optional<std::vector<LegWindow>> departure_time;
  std::optional<std::vector<LegWindow>> arrival_time;
  std::optional<std::vector<std::string>> plane_types;
  std::optional<std::vector<std::string>> preferred_airlines;
  bool operator==(const AirlineConstraints&) const = default;
};

struct HotelConstraints {
  std::optional<Cents> daily_budget_max;
  std::optional<Cents> total_budget_max;
  std::optional<Rating> min_rating;
  std::optional<std::vector<std::string>> brands;
  bool operator==(const HotelConstraints&) const = default;
};

struct BudgetConstraints {
  std::optional<Cents> total_budget;
  std::optional<Cents> everyday_budget;
  bool operator==(const BudgetConstraints&) const = default;
};

struct SymbolicRequest {
  std::vector<TripLeg> legs;
  AirlineConstraints airline;
  HotelConstraints hotel;
  BudgetConstraints budget;
  TripKind trip_kind = TripKind::kRoundTrip;
  bool operator==(const SymbolicRequest&) const = default;
};

// A block of consecutive nights spent in one city between two legs.
struct Stay {
  int index = 0;  // gap after leg `index`
  std::string city;
  Date first_night;
  Date end;  // exclusive: the departure date of the next leg
  int nights() const { return end - first_night; }
};

// One entry per gap between consecutive legs, including zero-night gaps.
std::vector<Stay> StaysOf(const SymbolicRequest& request);
// Distinct airport codes in order of first appearance.
std::vector<std::string> CitiesOf(const SymbolicRequest& request);

// Number of present optional fields per constraint family.
int CountAirlineConstraints(const AirlineConstraints& airline);
int CountHotelConstraints(const HotelConstraints& hotel);
int CountBudgetConstraints(const BudgetConstraints& budget);

bool IsAirportCode(std::string_view code);

// Sorts and deduplicates sets and orders per-leg windows by leg.
SymbolicRequest Canonicalize(SymbolicRequest request);
// Throws Error(kInvariantViolation) naming the offending field path.
void ValidateRequest(const SymbolicRequest& request);

// Throws Error with kMalformedJson, kSchemaViolation (JSON pointer path) or
// kInvariantViolation. The result is canonical.
SymbolicRequest ParseRequest(std::string_view json_text);
SymbolicRequest RequestFromJson(const nlohmann::json& json,
                                const std::string& base_path = "");

// Canonical form: fixed key order, sorted sets, absent optionals omitted,
// empty constraint families omitted.
nlohmann::ordered_json RequestToJson(const SymbolicRequest& request);
std::string SerializeRequest(const SymbolicRequest& request);

struct MatchResult {
  bool is_match = true;
  std::vector<std::string> mismatched_fields;
};

// Field-by-field comparison of canonical requests. An absent optional never
// equals a present one.
MatchResult ExactMatch(const SymbolicRequest& a, const SymbolicRequest& b);

}  // namespace wayplan

#endif  // WAYPLAN_REQUEST_HPP_
