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

#include "wayplan/request.hpp"

#include <algorithm>
#include <set>

#include <fmt/format.h>

#include "json_read.hpp"
#include "wayplan/error.hpp"

namespace wayplan {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;
namespace jr = json_read;

[[noreturn]] void Invariant(const std::string& path, const std::string& what) {
  throw Error(ErrorCode::kInvariantViolation, path + ": " + what, path);
}

void SortUnique(std::optional<std::vector<std::string>>& set) {
  if (!set) return;
  std::sort(set->begin(), set->end());
  set->erase(std::unique(set->begin(), set->end()), set->end());
}

void SortWindows(std::optional<std::vector<LegWindow>>& windows) {
  if (!windows) return;
  std::stable_sort(windows->begin(), windows->end(),
                   [](const LegWindow& a, const LegWindow& b) {
                     return a.leg < b.leg;
                   });
}

bool IsSetItem(std::string_view s) {
  if (s.empty() || s.front() == ' ' || s.back() == ' ') return false;
  return std::none_of(s.begin(), s.end(), [](char c) {
    return c == '"' || static_cast<unsigned char>(c) < 0x20;
  });
}

void ValidateSet(const std::optional<std::vector<std::string>>& set,
                 const std::string& path) {
  if (!set) return;
  if (set->empty()) Invariant(path, "present set must not be empty");
  for (std::size_t i = 0; i < set->size(); ++i) {
    if (!IsSetItem((*set)[i])) {
      Invariant(fmt::format("{}[{}]", path, i),
                "set items must be non-empty, unquoted and trimmed");
    }
    if (i > 0 && (*set)[i - 1] >= (*set)[i]) {
      Invariant(path, "set must be sorted and deduplicated");
    }
  }
}

void ValidateWindows(const std::optional<std::vector<LegWindow>>& windows,
                     std::size_t leg_count, const std::string& path) {
  if (!windows) return;
  if (windows->empty()) Invariant(path, "present window list must not be empty");
  for (std::size_t i = 0; i < windows->size(); ++i) {
    const LegWindow& w = (*windows)[i];
    const std::string item = fmt::format("{}[{}]", path, i);
    if (w.leg < 0 || static_cast<std::size_t>(w.leg) >= leg_count) {
      Invariant(item, "window refers to a leg that does not exist");
    }
    if (!w.window.IsValid()) {
      Invariant(item, "window must satisfy 00:00 <= start < end <= 24:00");
    }
    if (i > 0 && (*windows)[i - 1].leg >= w.leg) {
      Invariant(item, "at most one window per leg, ordered by leg");
    }
  }
}

void ValidateMoney(const std::optional<Cents>& amount, const std::string& path) {
  if (amount && amount->value() < 0) Invariant(path, "amount must be >= 0");
}

std::optional<std::vector<std::string>> ReadSet(const json& obj,
                                                std::string_view key,
                                                const std::string& path) {
  const json* v = jr::Find(obj, key);
  if (v == nullptr) return std::nullopt;
  const std::string p = jr::Child(path, key);
  std::vector<std::string> out;
  std::size_t i = 0;
  for (const auto& item : jr::Array(*v, p)) {
    out.push_back(jr::String(item, jr::Child(p, i++)));
  }
  return out;
}

std::optional<std::vector<LegWindow>> ReadWindows(const json& obj,
                                                  std::string_view key,
                                                  const std::string& path) {
  const json* v = jr::Find(obj, key);
  if (v == nullptr) return std::nullopt;
  const std::string p = jr::Child(path, key);
  std::vector<LegWindow> out;
  std::size_t i = 0;
  for (const auto& item : jr::Array(*v, p)) {
    const std::string ip = jr::Child(p, i++);
    jr::Object(item, ip, {"leg", "start", "end"});
    LegWindow w;
    // Legs are numbered from 1 on the wire.
    w.leg = static_cast<int>(jr::Integer(jr::Require(item, "leg", ip),
                                         jr::Child(ip, "leg"))) - 1;
    w.window.start = jr::TimeOfDay(jr::Require(item, "start", ip),
                                   jr::Child(ip, "start"));
    w.window.end =
        jr::TimeOfDay(jr::Require(item, "end", ip), jr::Child(ip, "end"));
    out.push_back(w);
  }
  return out;
}

template <typename T, typename Reader>
std::optional<T> ReadOptional(const json& obj, std::string_view key,
                              const std::string& path, Reader reader) {
  const json* v = jr::Find(obj, key);
  if (v == nullptr) return std::nullopt;
  return reader(*v, jr::Child(path, key));
}

ordered_json WindowsToJson(const std::vector<LegWindow>& windows) {
  ordered_json out = ordered_json::array();
  for (const LegWindow& w : windows) {
    ordered_json item;
    item["leg"] = w.leg + 1;
    item["start"] = FormatTimeOfDay(w.window.start);
    item["end"] = FormatTimeOfDay(w.window.end);
    out.push_back(std::move(item));
  }
  return out;
}

// Helper that records a mismatch under `prefix.name` when values differ.
struct Comparer {
  MatchResult& result;
  template <typename T>
  void Field(const std::string& name, const T& a, const T& b) {
    if (!(a == b)) result.mismatched_fields.push_back(name);
  }
};

}  // namespace

std::string_view TripKindName(TripKind kind) {
  return kind == TripKind::kRoundTrip ? "round_trip" : "one_way";
}

std::string_view CabinClassName(CabinClass cabin) {
  switch (cabin) {
    case CabinClass::kCoach: return "coach";
    case CabinClass::kPremium: return "premium";
    case CabinClass::kBusiness: return "business";
    case CabinClass::kFirst: return "first";
  }
  return "coach";
}

std::optional<CabinClass> ParseCabinClass(std::string_view name) {
  if (name == "coach") return CabinClass::kCoach;
  if (name == "premium") return CabinClass::kPremium;
  if (name == "business") return CabinClass::kBusiness;
  if (name == "first") return CabinClass::kFirst;
  return std::nullopt;
}

bool IsAirportCode(std::string_view code) {
  return code.size() == 3 && std::all_of(code.begin(), code.end(), [](char c) {
           return c >= 'A' && c <= 'Z';
         });
}

std::vector<Stay> StaysOf(const SymbolicRequest& request) {
  std::vector<Stay> stays;
  for (std::size_t k = 0; k + 1 < request.legs.size(); ++k) {
    stays.push_back(Stay{static_cast<int>(k), request.legs[k].destination,
                         request.legs[k].date, request.legs[k + 1].date});
  }
  return stays;
}

std::vector<std::string> CitiesOf(const SymbolicRequest& request) {
  std::vector<std::string> cities;
  auto add = [&](const std::string& c) {
    if (std::find(cities.begin(), cities.end(), c) == cities.end()) {
      cities.push_back(c);
    }
  };
  for (const TripLeg& leg : request.legs) {
    add(leg.origin);
    add(leg.destination);
  }
  return cities;
}

int CountAirlineConstraints(const AirlineConstraints& a) {
  return int(a.price_total_max.has_value()) + int(a.cabin_class.has_value()) +
         int(a.refundable.has_value()) + int(a.nonstop_only.has_value()) +
         int(a.must_not_basic_economy.has_value()) +
         int(a.no_mixed_cabin.has_value()) + int(a.avoid_red_eye.has_value()) +
         int(a.departure_time.has_value()) + int(a.arrival_time.has_value()) +
         int(a.plane_types.has_value()) + int(a.preferred_airlines.has_value());
}

int CountHotelConstraints(const HotelConstraints& h) {
  return int(h.daily_budget_max.has_value()) +
         int(h.total_budget_max.has_value()) + int(h.min_rating.has_value()) +
         int(h.brands.has_value());
}

int CountBudgetConstraints(const BudgetConstraints& b) {
  return int(b.total_budget.has_value()) + int(b.everyday_budget.has_value());
}

SymbolicRequest Canonicalize(SymbolicRequest r) {
  SortUnique(r.airline.plane_types);
  SortUnique(r.airline.preferred_airlines);
  SortUnique(r.hotel.brands);
  SortWindows(r.airline.departure_time);
  SortWindows(r.airline.arrival_time);
  return r;
}

void ValidateRequest(const SymbolicRequest& r) {
  if (r.legs.empty() || r.legs.size() > 3) {
    Invariant("legs", fmt::format("expected 1 to 3 legs, got {}", r.legs.size()));
  }
  for (std::size_t k = 0; k < r.legs.size(); ++k) {
    const TripLeg& leg = r.legs[k];
    const std::string p = fmt::format("legs[{}]", k);
    if (!IsAirportCode(leg.origin)) Invariant(p + ".origin", "expected 3-letter airport code");
    if (!IsAirportCode(leg.destination)) {
      Invariant(p + ".destination", "expected 3-letter airport code");
    }
    if (leg.origin == leg.destination) Invariant(p, "origin equals destination");
    if (k > 0) {
      if (r.legs[k - 1].destination != leg.origin) {
        Invariant(p + ".origin", "leg does not start where the previous leg ends");
      }
      if (leg.date < r.legs[k - 1].date) Invariant(p + ".date", "legs are not date-ordered");
    }
  }
  if (r.trip_kind == TripKind::kOneWay && r.legs.size() != 1) {
    Invariant("trip_kind", "a one-way trip has exactly one leg");
  }
  if (r.trip_kind == TripKind::kRoundTrip) {
    if (r.legs.size() < 2) Invariant("trip_kind", "a round trip needs 2 or 3 legs");
    if (r.legs.back().destination != r.legs.front().origin) {
      Invariant("trip_kind", "a round trip must return to its origin");
    }
  }
  const AirlineConstraints& a = r.airline;
  ValidateMoney(a.price_total_max, "airline.price_total_max");
  ValidateWindows(a.departure_time, r.legs.size(), "airline.departure_time");
  ValidateWindows(a.arrival_time, r.legs.size(), "airline.arrival_time");
  ValidateSet(a.plane_types, "airline.plane_types");
  ValidateSet(a.preferred_airlines, "airline.preferred_airlines");
  ValidateMoney(r.hotel.daily_budget_max, "hotel.daily_budget_max");
  ValidateMoney(r.hotel.total_budget_max, "hotel.total_budget_max");
  if (r.hotel.min_rating && !r.hotel.min_rating->IsValid()) {
    Invariant("hotel.min_rating", "rating must lie in [0,5]");
  }
  ValidateSet(r.hotel.brands, "hotel.brands");
  ValidateMoney(r.budget.total_budget, "budget.total_budget");
  ValidateMoney(r.budget.everyday_budget, "budget.everyday_budget");
}

SymbolicRequest RequestFromJson(const json& j, const std::string& base) {
  jr::Object(j, base, {"trip_kind", "legs", "airline", "hotel", "budget"});
  SymbolicRequest r;
  const std::string kind_path = jr::Child(base, "trip_kind");
  if (const json* kind = jr::Find(j, "trip_kind")) {
    const std::string k = jr::String(*kind, kind_path);
    if (k == "round_trip") {
      r.trip_kind = TripKind::kRoundTrip;
    } else if (k == "one_way") {
      r.trip_kind = TripKind::kOneWay;
    } else {
      jr::Fail(kind_path, "expected \"round_trip\" or \"one_way\"");
    }
  }
  const std::string legs_path = jr::Child(base, "legs");
  std::size_t i = 0;
  for (const auto& item : jr::Array(jr::Require(j, "legs", base), legs_path)) {
    const std::string p = jr::Child(legs_path, i++);
    jr::Object(item, p, {"date", "origin", "destination"});
    r.legs.push_back(TripLeg{
        jr::ReadDate(jr::Require(item, "date", p), jr::Child(p, "date")),
        jr::String(jr::Require(item, "origin", p), jr::Child(p, "origin")),
        jr::String(jr::Require(item, "destination", p),
                   jr::Child(p, "destination"))});
  }
  // Trip kind is implied by the leg shape when omitted.
  if (jr::Find(j, "trip_kind") == nullptr) {
    r.trip_kind = r.legs.size() == 1 ? TripKind::kOneWay : TripKind::kRoundTrip;
  }

  if (const json* a = jr::Find(j, "airline")) {
    const std::string p = jr::Child(base, "airline");
    jr::Object(*a, p,
               {"price_total_max", "cabin_class", "refundable", "nonstop_only",
                "must_not_basic_economy", "no_mixed_cabin", "avoid_red_eye",
                "departure_time", "arrival_time", "plane_types",
                "preferred_airlines"});
    AirlineConstraints& ac = r.airline;
    ac.price_total_max = ReadOptional<Cents>(*a, "price_total_max", p, jr::Money);
    ac.cabin_class = ReadOptional<CabinClass>(
        *a, "cabin_class", p, [](const json& v, const std::string& vp) {
          const auto c = ParseCabinClass(jr::String(v, vp));
          if (!c) jr::Fail(vp, "expected coach, premium, business or first");
          return *c;
        });
    ac.refundable = ReadOptional<bool>(*a, "refundable", p, jr::Bool);
    ac.nonstop_only = ReadOptional<bool>(*a, "nonstop_only", p, jr::Bool);
    ac.must_not_basic_economy =
        ReadOptional<bool>(*a, "must_not_basic_economy", p, jr::Bool);
    ac.no_mixed_cabin = ReadOptional<bool>(*a, "no_mixed_cabin", p, jr::Bool);
    ac.avoid_red_eye = ReadOptional<bool>(*a, "avoid_red_eye", p, jr::Bool);
    ac.departure_time = ReadWindows(*a, "departure_time", p);
    ac.arrival_time = ReadWindows(*a, "arrival_time", p);
    ac.plane_types = ReadSet(*a, "plane_types", p);
    ac.preferred_airlines = ReadSet(*a, "preferred_airlines", p);
  }
  if (const json* h = jr::Find(j, "hotel")) {
    const std::string p = jr::Child(base, "hotel");
    jr::Object(*h, p, {"daily_budget_max", "total_budget_max", "min_rating", "brands"});
    r.hotel.daily_budget_max = ReadOptional<Cents>(*h, "daily_budget_max", p, jr::Money);
    r.hotel.total_budget_max = ReadOptional<Cents>(*h, "total_budget_max", p, jr::Money);
    r.hotel.min_rating = ReadOptional<Rating>(*h, "min_rating", p, jr::ReadRating);
    r.hotel.brands = ReadSet(*h, "brands", p);
  }
  if (const json* b = jr::Find(j, "budget")) {
    const std::string p = jr::Child(base, "budget");
    jr::Object(*b, p, {"total_budget", "everyday_budget"});
    r.budget.total_budget = ReadOptional<Cents>(*b, "total_budget", p, jr::Money);
    r.budget.everyday_budget = ReadOptional<Cents>(*b, "everyday_budget", p, jr::Money);
  }
  r = Canonicalize(std::move(r));
  ValidateRequest(r);
  return r;
}

SymbolicRequest ParseRequest(std::string_view json_text) {
  return RequestFromJson(jr::ParseText(json_text));
}

ordered_json RequestToJson(const SymbolicRequest& r) {
  ordered_json out;
  out["trip_kind"] = TripKindName(r.trip_kind);
  out["legs"] = ordered_json::array();
  for (const TripLeg& leg : r.legs) {
    ordered_json l;
    l["date"] = leg.date.ToString();
    l["origin"] = leg.origin;
    l["destination"] = leg.destination;
    out["legs"].push_back(std::move(l));
  }
  const AirlineConstraints& a = r.airline;
  ordered_json air = ordered_json::object();
  if (a.price_total_max) air["price_total_max"] = a.price_total_max->value();
  if (a.cabin_class) air["cabin_class"] = CabinClassName(*a.cabin_class);
  if (a.refundable) air["refundable"] = *a.refundable;
  if (a.nonstop_only) air["nonstop_only"] = *a.nonstop_only;
  if (a.must_not_basic_economy) air["must_not_basic_economy"] = *a.must_not_basic_economy;
  if (a.no_mixed_cabin) air["no_mixed_cabin"] = *a.no_mixed_cabin;
  if (a.avoid_red_eye) air["avoid_red_eye"] = *a.avoid_red_eye;
  if (a.departure_time) air["departure_time"] = WindowsToJson(*a.departure_time);
  if (a.arrival_time) air["arrival_time"] = WindowsToJson(*a.arrival_time);
  if (a.plane_types) air["plane_types"] = *a.plane_types;
  if (a.preferred_airlines) air["preferred_airlines"] = *a.preferred_airlines;
  if (!air.empty()) out["airline"] = std::move(air);

  ordered_json hotel = ordered_json::object();
  if (r.hotel.daily_budget_max) hotel["daily_budget_max"] = r.hotel.daily_budget_max->value();
  if (r.hotel.total_budget_max) hotel["total_budget_max"] = r.hotel.total_budget_max->value();
  if (r.hotel.min_rating) hotel["min_rating"] = r.hotel.min_rating->stars();
  if (r.hotel.brands) hotel["brands"] = *r.hotel.brands;
  if (!hotel.empty()) out["hotel"] = std::move(hotel);

  ordered_json budget = ordered_json::object();
  if (r.budget.total_budget) budget["total_budget"] = r.budget.total_budget->value();
  if (r.budget.everyday_budget) budget["everyday_budget"] = r.budget.everyday_budget->value();
  if (!budget.empty()) out["budget"] = std::move(budget);
  return out;
}

std::string SerializeRequest(const SymbolicRequest& request) {
  return RequestToJson(Canonicalize(request)).dump();
}

MatchResult ExactMatch(const SymbolicRequest& lhs, const SymbolicRequest& rhs) {
  const SymbolicRequest a = Canonicalize(lhs);
  const SymbolicRequest b = Canonicalize(rhs);
  MatchResult result;
  Comparer cmp{result};
  cmp.Field("trip_kind", a.trip_kind, b.trip_kind);
  if (a.legs.size() != b.legs.size()) {
    result.mismatched_fields.push_back("legs");
  } else {
    for (std::size_t k = 0; k < a.legs.size(); ++k) {
      const std::string p = fmt::format("legs[{}].", k);
      cmp.Field(p + "date", a.legs[k].date, b.legs[k].date);
      cmp.Field(p + "origin", a.legs[k].origin, b.legs[k].origin);
      cmp.Field(p + "destination", a.legs[k].destination, b.legs[k].destination);
    }
  }
  const AirlineConstraints& x = a.airline;
  const AirlineConstraints& y = b.airline;
  cmp.Field("airline.price_total_max", x.price_total_max, y.price_total_max);
  cmp.Field("airline.cabin_class", x.cabin_class, y.cabin_class);
  cmp.Field("airline.refundable", x.refundable, y.refundable);
  cmp.Field("airline.nonstop_only", x.nonstop_only, y.nonstop_only);
  cmp.Field("airline.must_not_basic_economy", x.must_not_basic_economy,
            y.must_not_basic_economy);
  cmp.Field("airline.no_mixed_cabin", x.no_mixed_cabin, y.no_mixed_cabin);
  cmp.Field("airline.avoid_red_eye", x.avoid_red_eye, y.avoid_red_eye);
  cmp.Field("airline.departure_time", x.departure_time, y.departure_time);
  cmp.Field("airline.arrival_time", x.arrival_time, y.arrival_time);
  cmp.Field("airline.plane_types", x.plane_types, y.plane_types);
  cmp.Field("airline.preferred_airlines", x.preferred_airlines,
            y.preferred_airlines);
  cmp.Field("hotel.daily_budget_max", a.hotel.daily_budget_max,
            b.hotel.daily_budget_max);
  cmp.Field("hotel.total_budget_max", a.hotel.total_budget_max,
            b.hotel.total_budget_max);
  cmp.Field("hotel.min_rating", a.hotel.min_rating, b.hotel.min_rating);
  cmp.Field("hotel.brands", a.hotel.brands, b.hotel.brands);
  cmp.Field("budget.total_budget", a.budget.total_budget, b.budget.total_budget);
  cmp.Field("budget.everyday_budget", a.budget.everyday_budget,
            b.budget.everyday_budget);
  result.is_match = result.mismatched_fields.empty();
  return result;
}

}  // namespace wayplan
