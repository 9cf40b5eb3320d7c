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

#include "wayplan/inventory.hpp"

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

}  // namespace

void ValidateFlight(const FlightOption& f, const std::string& path) {
  if (f.id.empty()) Invariant(path + ".id", "empty id");
  if (!IsAirportCode(f.origin)) Invariant(path + ".origin", "expected airport code");
  if (!IsAirportCode(f.destination)) {
    Invariant(path + ".destination", "expected airport code");
  }
  if (!(f.departure < f.arrival)) Invariant(path, "departure must precede arrival");
  if (f.price.value() <= 0) Invariant(path + ".price", "price must be positive");
}

void ValidateHotel(const HotelOption& h, const std::string& path) {
  if (h.id.empty()) Invariant(path + ".id", "empty id");
  if (!IsAirportCode(h.city)) Invariant(path + ".city", "expected airport code");
  if (!h.rating.IsValid()) Invariant(path + ".rating", "rating must lie in [0,5]");
  if (h.price_per_night.value() <= 0) {
    Invariant(path + ".price_per_night", "price must be positive");
  }
  if (h.earliest_checkin < 0 || h.earliest_checkin >= kMinutesPerDay ||
      h.latest_checkout < 0 || h.latest_checkout >= kMinutesPerDay) {
    Invariant(path, "check-in/check-out must be valid times of day");
  }
  if (h.available_to < h.available_from) {
    Invariant(path + ".available_to", "availability range is empty");
  }
}

void ValidateInventory(const Inventory& inv) {
  std::set<std::string> ids;
  for (std::size_t i = 0; i < inv.flights.size(); ++i) {
    const std::string p = fmt::format("flights[{}]", i);
    ValidateFlight(inv.flights[i], p);
    if (!ids.insert(inv.flights[i].id).second) Invariant(p + ".id", "duplicate flight id");
  }
  ids.clear();
  for (std::size_t i = 0; i < inv.hotels.size(); ++i) {
    const std::string p = fmt::format("hotels[{}]", i);
    ValidateHotel(inv.hotels[i], p);
    if (!ids.insert(inv.hotels[i].id).second) Invariant(p + ".id", "duplicate hotel id");
  }
}

ordered_json FlightToJson(const FlightOption& f) {
  ordered_json j;
  j["id"] = f.id;
  j["origin"] = f.origin;
  j["destination"] = f.destination;
  j["departure"] = f.departure.ToString();
  j["arrival"] = f.arrival.ToString();
  j["price"] = f.price.value();
  j["cabin_class"] = CabinClassName(f.cabin_class);
  j["is_basic_economy"] = f.is_basic_economy;
  j["is_mixed_cabin"] = f.is_mixed_cabin;
  j["is_nonstop"] = f.is_nonstop;
  j["airline"] = f.airline;
  j["plane_type"] = f.plane_type;
  j["refundable"] = f.refundable;
  return j;
}

ordered_json HotelToJson(const HotelOption& h) {
  ordered_json j;
  j["id"] = h.id;
  j["city"] = h.city;
  j["name"] = h.name;
  j["brand"] = h.brand;
  j["rating"] = h.rating.stars();
  j["price_per_night"] = h.price_per_night.value();
  j["earliest_checkin"] = FormatTimeOfDay(h.earliest_checkin);
  j["latest_checkout"] = FormatTimeOfDay(h.latest_checkout);
  j["available_from"] = h.available_from.ToString();
  j["available_to"] = h.available_to.ToString();
  return j;
}

ordered_json InventoryToJson(const Inventory& inv) {
  ordered_json j;
  j["flights"] = ordered_json::array();
  for (const auto& f : inv.flights) j["flights"].push_back(FlightToJson(f));
  j["hotels"] = ordered_json::array();
  for (const auto& h : inv.hotels) j["hotels"].push_back(HotelToJson(h));
  return j;
}

FlightOption FlightFromJson(const json& j, const std::string& p) {
  jr::Object(j, p,
             {"id", "origin", "destination", "departure", "arrival", "price",
              "cabin_class", "is_basic_economy", "is_mixed_cabin", "is_nonstop",
              "airline", "plane_type", "refundable"});
  auto req = [&](std::string_view key) -> const json& {
    return jr::Require(j, key, p);
  };
  auto c = [&](std::string_view key) { return jr::Child(p, key); };
  FlightOption f;
  f.id = jr::String(req("id"), c("id"));
  f.origin = jr::String(req("origin"), c("origin"));
  f.destination = jr::String(req("destination"), c("destination"));
  f.departure = jr::ReadDateTime(req("departure"), c("departure"));
  f.arrival = jr::ReadDateTime(req("arrival"), c("arrival"));
  f.price = jr::Money(req("price"), c("price"));
  const auto cabin = ParseCabinClass(jr::String(req("cabin_class"), c("cabin_class")));
  if (!cabin) jr::Fail(c("cabin_class"), "unknown cabin class");
  f.cabin_class = *cabin;
  f.is_basic_economy = jr::Bool(req("is_basic_economy"), c("is_basic_economy"));
  f.is_mixed_cabin = jr::Bool(req("is_mixed_cabin"), c("is_mixed_cabin"));
  f.is_nonstop = jr::Bool(req("is_nonstop"), c("is_nonstop"));
  f.airline = jr::String(req("airline"), c("airline"));
  f.plane_type = jr::String(req("plane_type"), c("plane_type"));
  f.refundable = jr::Bool(req("refundable"), c("refundable"));
  return f;
}

HotelOption HotelFromJson(const json& j, const std::string& p) {
  jr::Object(j, p,
             {"id", "city", "name", "brand", "rating", "price_per_night",
              "earliest_checkin", "latest_checkout", "available_from",
              "available_to"});
  auto req = [&](std::string_view key) -> const json& {
    return jr::Require(j, key, p);
  };
  auto c = [&](std::string_view key) { return jr::Child(p, key); };
  HotelOption h;
  h.id = jr::String(req("id"), c("id"));
  h.city = jr::String(req("city"), c("city"));
  h.name = jr::String(req("name"), c("name"));
  h.brand = jr::String(req("brand"), c("brand"));
  h.rating = jr::ReadRating(req("rating"), c("rating"));
  h.price_per_night = jr::Money(req("price_per_night"), c("price_per_night"));
  h.earliest_checkin = jr::TimeOfDay(req("earliest_checkin"), c("earliest_checkin"));
  h.latest_checkout = jr::TimeOfDay(req("latest_checkout"), c("latest_checkout"));
  h.available_from = jr::ReadDate(req("available_from"), c("available_from"));
  h.available_to = jr::ReadDate(req("available_to"), c("available_to"));
  return h;
}

Inventory InventoryFromJson(const json& j, const std::string& p) {
  jr::Object(j, p, {"flights", "hotels"});
  Inventory inv;
  if (const json* fl = jr::Find(j, "flights")) {
    const std::string fp = jr::Child(p, "flights");
    std::size_t i = 0;
    for (const auto& item : jr::Array(*fl, fp)) {
      inv.flights.push_back(FlightFromJson(item, jr::Child(fp, i++)));
    }
  }
  if (const json* hl = jr::Find(j, "hotels")) {
    const std::string hp = jr::Child(p, "hotels");
    std::size_t i = 0;
    for (const auto& item : jr::Array(*hl, hp)) {
      inv.hotels.push_back(HotelFromJson(item, jr::Child(hp, i++)));
    }
  }
  ValidateInventory(inv);
  return inv;
}

ordered_json ScheduleToJson(const Schedule& s) {
  ordered_json j;
  j["slot_minutes"] = s.slot_minutes;
  j["origin"] = s.origin.ToString();
  j["locations"] = s.locations;
  ordered_json where = ordered_json::array();
  for (int t = 0; t < s.num_slots(); ++t) {
    std::string name = "?";
    int count = 0;
    for (std::size_t l = 0; l < s.u.size(); ++l) {
      if (s.u[l][t]) {
        name = s.locations[l];
        ++count;
      }
    }
    where.push_back(count == 1 ? name : "?");
  }
  j["location"] = std::move(where);
  j["asleep"] = s.asleep;
  j["event"] = s.event;
  return j;
}

ordered_json CostToJson(const CostBreakdown& c) {
  ordered_json j;
  j["flight_total"] = c.flight_total.value();
  j["hotel_total"] = c.hotel_total.value();
  j["grand_total"] = c.grand_total.value();
  j["soft_penalty"] = c.soft_penalty.value();
  return j;
}

ordered_json ItineraryToJson(const Itinerary& it, const Inventory* inv) {
  ordered_json j;
  j["flights"] = ordered_json::array();
  for (const ChosenFlight& cf : it.flights) {
    ordered_json f;
    f["leg"] = cf.leg + 1;
    f["id"] = cf.flight_id;
    if (inv != nullptr) {
      if (const FlightOption* opt = FindFlight(*inv, cf.flight_id)) {
        f["detail"] = FlightToJson(*opt);
      }
    }
    j["flights"].push_back(std::move(f));
  }
  j["hotels"] = ordered_json::array();
  for (const ChosenHotel& ch : it.hotels) {
    ordered_json h;
    h["stay"] = ch.stay + 1;
    h["id"] = ch.hotel_id;
    h["first_night"] = ch.first_night.ToString();
    h["checkout_date"] = ch.end.ToString();
    if (inv != nullptr) {
      if (const HotelOption* opt = FindHotel(*inv, ch.hotel_id)) {
        h["detail"] = HotelToJson(*opt);
      }
    }
    j["hotels"].push_back(std::move(h));
  }
  j["cost"] = CostToJson(it.cost);
  if (it.timeline) j["timeline"] = ScheduleToJson(*it.timeline);
  return j;
}

Itinerary ItineraryFromJson(const json& j, const std::string& p) {
  jr::Object(j, p, {"flights", "hotels", "cost", "timeline"});
  Itinerary it;
  const std::string fp = jr::Child(p, "flights");
  std::size_t i = 0;
  for (const auto& f : jr::Array(jr::Require(j, "flights", p), fp)) {
    const std::string ip = jr::Child(fp, i++);
    jr::Object(f, ip, {"leg", "id", "detail"});
    it.flights.push_back(ChosenFlight{
        static_cast<int>(jr::Integer(jr::Require(f, "leg", ip), ip + "/leg")) - 1,
        jr::String(jr::Require(f, "id", ip), ip + "/id")});
  }
  if (const json* hotels = jr::Find(j, "hotels")) {
    const std::string hp = jr::Child(p, "hotels");
    i = 0;
    for (const auto& h : jr::Array(*hotels, hp)) {
      const std::string ip = jr::Child(hp, i++);
      jr::Object(h, ip, {"stay", "id", "first_night", "checkout_date", "detail"});
      it.hotels.push_back(ChosenHotel{
          static_cast<int>(jr::Integer(jr::Require(h, "stay", ip), ip + "/stay")) - 1,
          jr::String(jr::Require(h, "id", ip), ip + "/id"),
          jr::ReadDate(jr::Require(h, "first_night", ip), ip + "/first_night"),
          jr::ReadDate(jr::Require(h, "checkout_date", ip), ip + "/checkout_date")});
    }
  }
  if (const json* cost = jr::Find(j, "cost")) {
    const std::string cp = jr::Child(p, "cost");
    jr::Object(*cost, cp, {"flight_total", "hotel_total", "grand_total", "soft_penalty"});
    auto money = [&](std::string_view key) {
      const json* v = jr::Find(*cost, key);
      return v ? jr::Money(*v, jr::Child(cp, key)) : Cents(0);
    };
    it.cost = CostBreakdown{money("flight_total"), money("hotel_total"),
                            money("grand_total"), money("soft_penalty")};
  }
  // Timelines are solver output; re-simulation does not need them.
  return it;
}

const FlightOption* FindFlight(const Inventory& inv, const std::string& id) {
  for (const auto& f : inv.flights) {
    if (f.id == id) return &f;
  }
  return nullptr;
}

const HotelOption* FindHotel(const Inventory& inv, const std::string& id) {
  for (const auto& h : inv.hotels) {
    if (h.id == id) return &h;
  }
  return nullptr;
}

}  // namespace wayplan
