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

// Shared fixtures for the unit tests.

#ifndef WAYPLAN_TESTS_TEST_SUPPORT_HPP_
#define WAYPLAN_TESTS_TEST_SUPPORT_HPP_

#include <string>
#include <utility>
#include <vector>

#include "wayplan/calendar.hpp"
#include "wayplan/datagen.hpp"
#include "wayplan/inventory.hpp"
#include "wayplan/request.hpp"

namespace wayplan::testing {

inline Date D(int y, unsigned m, unsigned d) { return Date::FromYmd(y, m, d); }

inline DateTime At(Date d, int hh, int mm = 0) { return DateTime::At(d, hh * 60 + mm); }

// The DEN -> MIA -> JFK -> DEN request used in the README walkthrough.
inline SymbolicRequest DemoRequest() {
  SymbolicRequest r;
  r.legs = {{D(2025, 1, 15), "DEN", "MIA"},
            {D(2025, 1, 17), "MIA", "JFK"},
            {D(2025, 1, 18), "JFK", "DEN"}};
  r.airline.cabin_class = CabinClass::kCoach;
  r.airline.nonstop_only = true;
  r.airline.must_not_basic_economy = true;
  r.airline.no_mixed_cabin = true;
  r.airline.price_total_max = Cents::Dollars(1383);
  r.hotel.daily_budget_max = Cents::Dollars(317);
  r.hotel.total_budget_max = Cents::Dollars(952);
  return r;
}

inline FlightOption Flight(std::string id, std::string from, std::string to, DateTime dep,
                           DateTime arr, std::int64_t dollars) {
  FlightOption f;
  f.id = std::move(id);
  f.origin = std::move(from);
  f.destination = std::move(to);
  f.departure = dep;
  f.arrival = arr;
  f.price = Cents::Dollars(dollars);
  f.airline = "Delta";
  f.plane_type = "Airbus A320";
  return f;
}

inline HotelOption Hotel(std::string id, std::string city, std::int64_t dollars, int tenths,
                         Date from, Date to) {
  HotelOption h;
  h.id = std::move(id);
  h.city = std::move(city);
  h.name = h.id + " Inn";
  h.brand = "Hilton";
  h.rating = Rating(tenths);
  h.price_per_night = Cents::Dollars(dollars);
  h.available_from = from;
  h.available_to = to;
  return h;
}

// Two-leg round trip BOS -> ORD -> BOS with two nights in Chicago.
struct TinyInstance {
  SymbolicRequest request;
  Inventory inventory;
};

inline TinyInstance Tiny() {
  TinyInstance t;
  const Date d1 = D(2025, 3, 10);
  const Date d2 = D(2025, 3, 12);
  t.request.legs = {{d1, "BOS", "ORD"}, {d2, "ORD", "BOS"}};
  t.inventory.flights = {
      Flight("A1", "BOS", "ORD", At(d1, 9), At(d1, 11), 200),
      Flight("A2", "BOS", "ORD", At(d1, 13), At(d1, 15), 150),
      Flight("B1", "ORD", "BOS", At(d2, 12), At(d2, 14), 180),
      Flight("B2", "ORD", "BOS", At(d2, 18), At(d2, 20), 160),
  };
  t.inventory.flights[1].is_basic_economy = true;
  t.inventory.hotels = {
      Hotel("H1", "ORD", 120, 35, d1, d2),
      Hotel("H2", "ORD", 90, 30, d1, d2),
  };
  return t;
}

// Generator settings whose instances stay within 120 hourly slots.
inline GenParams SmallGen(std::uint64_t seed) {
  GenParams p;
  p.rng_seed = seed;
  p.leg_gap_days = {1, 2};
  return p;
}

}  // namespace wayplan::testing

#endif  // WAYPLAN_TESTS_TEST_SUPPORT_HPP_
