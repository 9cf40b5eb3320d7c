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

#ifndef WAYPLAN_INVENTORY_HPP_
#define WAYPLAN_INVENTORY_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "wayplan/calendar.hpp"
#include "wayplan/money.hpp"
#include "wayplan/request.hpp"

namespace wayplan {

struct FlightOption {
  std::string id;
  std::string origin;
  std::string destination;
  DateTime departure;
  DateTime arrival;
  Cents price;
  CabinClass cabin_class = CabinClass::kCoach;
  bool is_basic_economy = false;
  bool is_mixed_cabin = false;
  bool is_nonstop = true;
  std::string airline;
  std::string plane_type;
  bool refundable = false;
  bool operator==(const FlightOption&) const = default;
};

struct HotelOption {
  std::string id;
  std::string city;
  std::string name;
  std::string brand;
  Rating rating;
  Cents price_per_night;
  int earliest_checkin = 15 * 60;  // minutes from midnight
  int latest_checkout = 11 * 60;
  // Nights the hotel can be booked, both ends inclusive.
  Date available_from;
  Date available_to;

  bool CoversNights(Date first_night, Date end_exclusive) const {
    return available_from <= first_night && end_exclusive - 1 <= available_to;
  }
  bool operator==(const HotelOption&) const = default;
};

struct Inventory {
  std::vector<FlightOption> flights;
  std::vector<HotelOption> hotels;
  bool operator==(const Inventory&) const = default;
};

// Throws Error(kInvariantViolation) on departure >= arrival, non-positive
// prices, bad codes or duplicate ids.
void ValidateFlight(const FlightOption& flight, const std::string& path = "flight");
void ValidateHotel(const HotelOption& hotel, const std::string& path = "hotel");
void ValidateInventory(const Inventory& inventory);

nlohmann::ordered_json FlightToJson(const FlightOption& flight);
nlohmann::ordered_json HotelToJson(const HotelOption& hotel);
nlohmann::ordered_json InventoryToJson(const Inventory& inventory);
FlightOption FlightFromJson(const nlohmann::json& j, const std::string& path);
HotelOption HotelFromJson(const nlohmann::json& j, const std::string& path);
Inventory InventoryFromJson(const nlohmann::json& j, const std::string& path = "");

// Solver timeline. `u[l][t]` is 1 iff the traveller is at location l during
// slot t; the last location is the in-flight pseudo-location.
struct Schedule {
  int slot_minutes = 60;
  DateTime origin;
  std::vector<std::string> locations;
  std::vector<std::vector<std::uint8_t>> u;
  std::vector<std::uint8_t> asleep;
  std::vector<std::uint8_t> event;

  int num_slots() const { return static_cast<int>(asleep.size()); }
  bool operator==(const Schedule&) const = default;
};

inline constexpr const char* kAirLocation = "AIR";

struct CostBreakdown {
  Cents flight_total;
  Cents hotel_total;
  Cents grand_total;
  Cents soft_penalty;
  bool operator==(const CostBreakdown&) const = default;
};

struct ChosenFlight {
  int leg = 0;
  std::string flight_id;
  bool operator==(const ChosenFlight&) const = default;
};

struct ChosenHotel {
  int stay = 0;
  std::string hotel_id;
  Date first_night;
  Date end;  // exclusive
  bool operator==(const ChosenHotel&) const = default;
};

struct Itinerary {
  std::vector<ChosenFlight> flights;  // ordered by leg
  std::vector<ChosenHotel> hotels;    // ordered by stay
  std::optional<Schedule> timeline;
  CostBreakdown cost;
  bool operator==(const Itinerary&) const = default;
};

nlohmann::ordered_json ScheduleToJson(const Schedule& schedule);
nlohmann::ordered_json CostToJson(const CostBreakdown& cost);
// Includes flight/hotel details looked up from `inventory` when given.
nlohmann::ordered_json ItineraryToJson(const Itinerary& itinerary,
                                       const Inventory* inventory = nullptr);
Itinerary ItineraryFromJson(const nlohmann::json& j, const std::string& path = "");

const FlightOption* FindFlight(const Inventory& inventory, const std::string& id);
const HotelOption* FindHotel(const Inventory& inventory, const std::string& id);

}  // namespace wayplan

#endif  // WAYPLAN_INVENTORY_HPP_
