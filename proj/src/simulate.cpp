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

#include "wayplan/simulate.hpp"

#include <algorithm>

#include <fmt/format.h>

namespace wayplan {
namespace {

std::int64_t DivFloor(std::int64_t a, std::int64_t b) {
  return a >= 0 ? a / b : -((-a + b - 1) / b);
}

std::int64_t DivCeil(std::int64_t a, std::int64_t b) {
  return a >= 0 ? (a + b - 1) / b : -((-a) / b);
}

bool Listed(const std::optional<std::vector<std::string>>& set,
            const std::string& value) {
  if (!set) return true;
  return std::find(set->begin(), set->end(), value) != set->end();
}

}  // namespace

bool Verdict::Has(std::string_view code) const {
  return std::any_of(violations.begin(), violations.end(),
                     [&](const Violation& v) { return v.code == code; });
}

std::vector<std::string> Verdict::Codes() const {
  std::vector<std::string> codes;
  for (const Violation& v : violations) codes.push_back(v.code);
  return codes;
}

Simulator::Simulator(const SymbolicRequest& request, const Inventory& inventory,
                     const ModelParams& params)
    : request_(request), inventory_(&inventory), params_(params) {
  stays_ = StaysOf(request_);
  slot_minutes_ = params_.grid.slot_minutes;
  if (request_.legs.empty()) return;
  const Date first = request_.legs.front().date;
  const int days = request_.legs.back().date - first + 1;
  origin_ = DateTime::At(first, 0);
  num_slots_ = days * kMinutesPerDay / slot_minutes_;
  const int ns = params_.grid.night_start;
  const int ne = params_.grid.night_end;
  for (int day = 0; day + 1 < days; ++day) {
    // Evening of `day` through the morning of `day + 1`.
    const std::int64_t evening = std::int64_t{day} * kMinutesPerDay + ns +
                                 (ns <= ne ? kMinutesPerDay : 0);
    const std::int64_t morning = std::int64_t{day + 1} * kMinutesPerDay + ne;
    nights_.emplace_back(static_cast<int>(DivCeil(evening, slot_minutes_)),
                         static_cast<int>(DivFloor(morning, slot_minutes_)));
  }
}

int Simulator::SlotOf(DateTime time, bool round_up) const {
  const std::int64_t minutes = time - origin_;
  return static_cast<int>(round_up ? DivCeil(minutes, slot_minutes_)
                                   : DivFloor(minutes, slot_minutes_));
}

Simulator::Leg Simulator::SlotsOf(const FlightOption& flight) const {
  Leg leg;
  leg.depart_slot = SlotOf(flight.departure, false);
  // At least one whole slot in the air between departure and landing.
  leg.land_slot = std::max(SlotOf(flight.arrival, true), leg.depart_slot + 2);
  return leg;
}

bool Simulator::RedEye(const FlightOption& flight) const {
  const int tod = flight.departure.minute_of_day();
  const int a = params_.red_eye_start;
  const int b = params_.red_eye_end;
  return a <= b ? (a <= tod && tod < b) : (tod >= a || tod < b);
}

std::int64_t Simulator::PenaltyCents(const FlightOption& flight, int leg) const {
  std::int64_t slots = 0;
  auto charge = [&](const std::optional<std::vector<LegWindow>>& windows,
                    int tod) {
    if (!windows) return;
    for (const LegWindow& w : *windows) {
      if (w.leg != leg) continue;
      if (w.window.Contains(tod)) return;
      const int early = w.window.start - tod;
      const int late = tod - (w.window.end - 1);
      slots += DivCeil(std::max(early, late), slot_minutes_);
      return;
    }
  };
  charge(request_.airline.departure_time, flight.departure.minute_of_day());
  charge(request_.airline.arrival_time, flight.arrival.minute_of_day());
  return slots * params_.soft_penalty_per_slot.value();
}

std::string_view Simulator::FlightCategoricalFailure(const FlightOption& f) const {
  const AirlineConstraints& a = request_.airline;
  if (a.cabin_class && *a.cabin_class != f.cabin_class) return "airline.cabin_class";
  if (a.refundable == true && !f.refundable) return "airline.refundable";
  if (a.nonstop_only == true && !f.is_nonstop) return "airline.nonstop_only";
  if (a.must_not_basic_economy == true && f.is_basic_economy) {
    return "airline.must_not_basic_economy";
  }
  if (a.no_mixed_cabin == true && f.is_mixed_cabin) return "airline.no_mixed_cabin";
  if (a.avoid_red_eye == true && RedEye(f)) return "airline.avoid_red_eye";
  if (!Listed(a.plane_types, f.plane_type)) return "airline.plane_types";
  if (!Listed(a.preferred_airlines, f.airline)) return "airline.preferred_airlines";
  return {};
}

std::string_view Simulator::HotelCategoricalFailure(const HotelOption& h) const {
  if (request_.hotel.min_rating && h.rating < *request_.hotel.min_rating) {
    return "hotel.min_rating";
  }
  if (!Listed(request_.hotel.brands, h.brand)) return "hotel.brands";
  return {};
}

bool Simulator::HotelCovers(const HotelOption& hotel, const Stay& stay,
                            int slot) const {
  for (Date night = stay.first_night; night < stay.end; night = night + 1) {
    const int in = SlotOf(DateTime::At(night, hotel.earliest_checkin), true);
    const int out = SlotOf(DateTime::At(night + 1, hotel.latest_checkout), false);
    if (slot >= in && slot < out) return true;
  }
  return false;
}

std::string_view Simulator::LocationAt(int slot,
                                  std::span<const FlightOption* const> flights) const {
  if (slot <= SlotsOf(*flights[0]).depart_slot) return flights[0]->origin;
  for (std::size_t k = 0; k < flights.size(); ++k) {
    if (slot < SlotsOf(*flights[k]).land_slot) return kAirLocation;
    if (k + 1 == flights.size() || slot <= SlotsOf(*flights[k + 1]).depart_slot) {
      return flights[k]->destination;
    }
  }
  return flights.back()->destination;
}

bool Simulator::Sleepable(int slot, std::span<const FlightOption* const> flights,
                          std::span<const HotelOption* const> hotels) const {
  const std::string_view here = LocationAt(slot, flights);
  if (here == kAirLocation) return false;
  bool covered = false;
  for (std::size_t s = 0; s < hotels.size() && s < stays_.size(); ++s) {
    if (hotels[s] == nullptr || !HotelCovers(*hotels[s], stays_[s], slot)) continue;
    if (hotels[s]->city != here) return false;
    covered = true;
  }
  return covered;
}

double Simulator::Objective(std::span<const FlightOption* const> flights,
                            std::span<const HotelOption* const> hotels) const {
  double flight_cost = 0;
  double hotel_cost = 0;
  double credit = 0;
  double penalty = 0;
  for (std::size_t k = 0; k < flights.size(); ++k) {
    if (flights[k] == nullptr) continue;
    const FlightOption& f = *flights[k];
    flight_cost += static_cast<double>(f.price.value());
    penalty += static_cast<double>(PenaltyCents(f, static_cast<int>(k)));
    if (params_.mode == ObjectiveMode::kBetterFlight) {
      int points = f.is_nonstop ? 1 : 0;
      switch (f.cabin_class) {
        case CabinClass::kCoach: break;
        case CabinClass::kPremium: points += 1; break;
        case CabinClass::kBusiness: points += 2; break;
        case CabinClass::kFirst: points += 3; break;
      }
      credit += static_cast<double>(params_.flight_quality_bonus.value()) * points;
    }
  }
  for (std::size_t s = 0; s < hotels.size() && s < stays_.size(); ++s) {
    if (hotels[s] == nullptr) continue;
    const int nights = stays_[s].nights();
    hotel_cost += static_cast<double>(hotels[s]->price_per_night.value()) * nights;
    if (params_.mode == ObjectiveMode::kBetterHotel) {
      credit += static_cast<double>(params_.hotel_rating_bonus.value()) *
                hotels[s]->rating.tenths() * nights / 10.0;
    }
  }
  double wf = 1.0;
  double wh = 1.0;
  if (params_.mode == ObjectiveMode::kBetterHotel) {
    wf = params_.better_hotel.flight;
    wh = params_.better_hotel.hotel;
  } else if (params_.mode == ObjectiveMode::kBetterFlight) {
    wf = params_.better_flight.flight;
    wh = params_.better_flight.hotel;
  }
  return wf * flight_cost + wh * hotel_cost - credit + penalty;
}

bool Simulator::Run(std::span<const FlightOption* const> flights,
                    std::span<const HotelOption* const> hotels, Verdict* out) const {
  bool ok = true;
  // Records a violation; `describe` is only evaluated when collecting.
  auto fail = [&](std::string_view code, auto&& describe) {
    ok = false;
    if (out != nullptr) out->violations.push_back(Violation{std::string(code), describe()});
  };
#define WAYPLAN_STOP_EARLY() \
  if (!ok && out == nullptr) return false

  const std::size_t num_legs = request_.legs.size();
  bool timeline_ok = flights.size() == num_legs;
  std::vector<Leg> slots(num_legs);
  Cents flight_total;
  for (std::size_t k = 0; k < num_legs; ++k) {
    const FlightOption* f = k < flights.size() ? flights[k] : nullptr;
    if (f == nullptr) {
      timeline_ok = false;
      fail("flight.missing", [&] { return fmt::format("missing flight for leg {}", k + 1); });
      WAYPLAN_STOP_EARLY();
      continue;
    }
    flight_total += f->price;
    const TripLeg& leg = request_.legs[k];
    if (f->origin != leg.origin || f->destination != leg.destination ||
        f->departure.date() != leg.date) {
      fail("flight.route", [&] {
        return fmt::format("flight {} ({} -> {} on {}) does not serve leg {} ({} -> {} on {})",
                           f->id, f->origin, f->destination, f->departure.date().ToString(),
                           k + 1, leg.origin, leg.destination, leg.date.ToString());
      });
      WAYPLAN_STOP_EARLY();
    }
    if (std::string_view code = FlightCategoricalFailure(*f); !code.empty()) {
      fail(code, [&] { return fmt::format("flight {} on leg {} violates {}", f->id, k + 1, code); });
      WAYPLAN_STOP_EARLY();
    }
    slots[k] = SlotsOf(*f);
    if (slots[k].depart_slot < 0 || slots[k].land_slot > num_slots_ - 1) {
      timeline_ok = false;
      fail("flight.grid", [&] {
        return fmt::format("flight {} occupies slots {}..{} outside 0..{}", f->id,
                           slots[k].depart_slot, slots[k].land_slot, num_slots_ - 1);
      });
      WAYPLAN_STOP_EARLY();
    }
  }
  if (timeline_ok) {
    for (std::size_t k = 0; k + 1 < num_legs; ++k) {
      if (slots[k + 1].depart_slot < slots[k].land_slot) {
        timeline_ok = false;
        fail("commonsense.location", [&] {
          return fmt::format("leg {} departs at slot {} before leg {} lands at slot {}",
                             k + 2, slots[k + 1].depart_slot, k + 1, slots[k].land_slot);
        });
        WAYPLAN_STOP_EARLY();
      }
    }
  }

  Cents hotel_total;
  for (std::size_t s = 0; s < stays_.size(); ++s) {
    const Stay& stay = stays_[s];
    const HotelOption* h = s < hotels.size() ? hotels[s] : nullptr;
    if (stay.nights() <= 0) {
      if (h != nullptr) {
        fail("hotel.extra", [&] {
          return fmt::format("hotel {} booked for stay {} which has no nights", h->id, s + 1);
        });
        WAYPLAN_STOP_EARLY();
      }
      continue;
    }
    if (h == nullptr) {
      fail("hotel.missing", [&] {
        return fmt::format("missing hotel for stay {} in {}", s + 1, stay.city);
      });
      WAYPLAN_STOP_EARLY();
      continue;
    }
    hotel_total += h->price_per_night * stay.nights();
    if (h->city != stay.city) {
      fail("hotel.city", [&] {
        return fmt::format("hotel {} is in {}, stay {} is in {}", h->id, h->city, s + 1, stay.city);
      });
      WAYPLAN_STOP_EARLY();
    }
    if (!(h->available_from <= stay.first_night && stay.end - 1 <= h->available_to)) {
      fail("hotel.availability", [&] {
        return fmt::format("hotel {} is not bookable for nights {}..{}", h->id,
                           stay.first_night.ToString(), (stay.end - 1).ToString());
      });
      WAYPLAN_STOP_EARLY();
    }
    if (std::string_view code = HotelCategoricalFailure(*h); !code.empty()) {
      fail(code, [&] { return fmt::format("hotel {} for stay {} violates {}", h->id, s + 1, code); });
      WAYPLAN_STOP_EARLY();
    }
    for (const auto& [cap, code] :
         {std::pair{request_.hotel.daily_budget_max, "hotel.daily_budget_max"},
          std::pair{request_.budget.everyday_budget, "budget.everyday_budget"}}) {
      if (cap && h->price_per_night > *cap) {
        fail(code, [&] {
          return fmt::format("hotel {} costs {} per night, limit {}", h->id,
                             h->price_per_night.ToDollarString(), cap->ToDollarString());
        });
        WAYPLAN_STOP_EARLY();
      }
    }
  }

  const Cents grand_total = flight_total + hotel_total;
  const std::tuple<const std::optional<Cents>&, Cents, const char*> totals[] = {
      {request_.airline.price_total_max, flight_total, "airline.price_total_max"},
      {request_.hotel.total_budget_max, hotel_total, "hotel.total_budget_max"},
      {request_.budget.total_budget, grand_total, "budget.total_budget"},
  };
  for (const auto& [cap, spent, code] : totals) {
    if (cap && spent > *cap) {
      fail(code, [&] {
        return fmt::format("spend {} exceeds limit {}", spent.ToDollarString(),
                           cap->ToDollarString());
      });
      WAYPLAN_STOP_EARLY();
    }
  }

  if (timeline_ok) {
    for (std::size_t n = 0; n < nights_.size(); ++n) {
      int asleep = 0;
      for (int t = std::max(0, nights_[n].first); t < std::min(num_slots_, nights_[n].second);
           ++t) {
        if (Sleepable(t, flights, hotels)) ++asleep;
      }
      if (asleep < params_.min_sleep_slots) {
        fail(fmt::format("commonsense.sleep(night {})", n + 1), [&] {
          return fmt::format("only {} sleep slots available on night {}, need {}", asleep,
                             n + 1, params_.min_sleep_slots);
        });
        WAYPLAN_STOP_EARLY();
      }
    }
  }
#undef WAYPLAN_STOP_EARLY

  if (out != nullptr) {
    Cents penalty;
    for (std::size_t k = 0; k < num_legs && k < flights.size(); ++k) {
      if (flights[k] != nullptr) {
        penalty += Cents(PenaltyCents(*flights[k], static_cast<int>(k)));
      }
    }
    out->cost = CostBreakdown{flight_total, hotel_total, grand_total, penalty};
    out->objective = Objective(flights, hotels);
  }
  return ok;
}

bool Simulator::Feasible(std::span<const FlightOption* const> flights,
                         std::span<const HotelOption* const> hotels,
                         double* objective) const {
  if (!Run(flights, hotels, nullptr)) return false;
  if (objective != nullptr) *objective = Objective(flights, hotels);
  return true;
}

void Simulator::CheckTimeline(const Schedule& sc,
                              std::span<const FlightOption* const> flights,
                              std::span<const HotelOption* const> hotels,
                              Verdict* out) const {
  auto add = [&](std::string code, std::string message) {
    out->violations.push_back(Violation{std::move(code), std::move(message)});
  };
  const int T = num_slots_;
  bool shape_ok = sc.slot_minutes == slot_minutes_ && sc.origin == origin_ &&
                  sc.num_slots() == T && static_cast<int>(sc.event.size()) == T &&
                  sc.u.size() == sc.locations.size();
  for (const auto& row : sc.u) shape_ok = shape_ok && static_cast<int>(row.size()) == T;
  if (!shape_ok) {
    add("schedule.shape", fmt::format("timeline does not match the {}-slot trip grid", T));
    return;
  }
  auto index_of = [&](const std::string& name) -> int {
    auto it = std::find(sc.locations.begin(), sc.locations.end(), name);
    return it == sc.locations.end() ? -1 : static_cast<int>(it - sc.locations.begin());
  };
  const int air = index_of(kAirLocation);
  auto at = [&](int l, int t) { return l >= 0 && sc.u[l][t] == 1; };

  for (int t = 0; t < T; ++t) {
    int present = 0;
    for (const auto& row : sc.u) present += row[t];
    if (present != 1) {
      add("schedule.single_location",
          fmt::format("slot {} has {} active locations", t, present));
    }
  }
  for (int t = 0; t + 1 < T; ++t) {
    if (sc.event[t]) continue;
    for (std::size_t l = 0; l < sc.u.size(); ++l) {
      if (sc.u[l][t] != sc.u[l][t + 1]) {
        add("schedule.teleport",
            fmt::format("location changes between slots {} and {} without an event", t, t + 1));
        break;
      }
    }
  }
  std::vector<char> event_allowed(T, 0);
  for (std::size_t k = 0; k < flights.size(); ++k) {
    const FlightOption& f = *flights[k];
    const Leg s = SlotsOf(f);
    event_allowed[s.depart_slot] = 1;
    event_allowed[s.land_slot - 1] = 1;
    const int src = index_of(f.origin);
    const int dst = index_of(f.destination);
    if (src < 0 || dst < 0 || air < 0) {
      add("schedule.location", fmt::format("timeline lacks a location used by flight {}", f.id));
      continue;
    }
    const std::tuple<bool, int, const char*> pins[] = {
        {at(src, s.depart_slot), s.depart_slot, "at origin"},
        {at(air, s.depart_slot + 1), s.depart_slot + 1, "in the air"},
        {at(dst, s.land_slot), s.land_slot, "at destination"},
        {at(air, s.land_slot - 1), s.land_slot - 1, "in the air"},
        {sc.event[s.depart_slot] == 1, s.depart_slot, "an event"},
        {sc.event[s.land_slot - 1] == 1, s.land_slot - 1, "an event"},
    };
    for (const auto& [held, t, what] : pins) {
      if (!held) {
        add("schedule.flight",
            fmt::format("flight {} requires {} at slot {}", f.id, what, t));
      }
    }
  }
  for (int t = 0; t < T; ++t) {
    if (sc.event[t] && !event_allowed[t]) {
      add("schedule.event", fmt::format("event at slot {} matches no chosen flight", t));
    }
  }
  for (int t = 0; t < T; ++t) {
    if (!sc.asleep[t]) continue;
    bool allowed = !at(air, t);
    bool covered = false;
    for (std::size_t s = 0; s < hotels.size() && s < stays_.size(); ++s) {
      if (hotels[s] == nullptr || !HotelCovers(*hotels[s], stays_[s], t)) continue;
      covered = true;
      allowed = allowed && at(index_of(hotels[s]->city), t);
    }
    if (!allowed || !covered) {
      add("schedule.sleep_not_allowed", fmt::format("asleep at slot {} outside a booked hotel", t));
    }
  }
  for (std::size_t n = 0; n < nights_.size(); ++n) {
    int asleep = 0;
    for (int t = std::max(0, nights_[n].first); t < std::min(T, nights_[n].second); ++t) {
      asleep += sc.asleep[t];
    }
    if (asleep < params_.min_sleep_slots) {
      add(fmt::format("schedule.sleep(night {})", n + 1),
          fmt::format("timeline sleeps {} slots on night {}, need {}", asleep, n + 1,
                      params_.min_sleep_slots));
    }
  }
}

Verdict Simulator::Check(const Itinerary& itinerary) const {
  Verdict verdict;
  std::vector<const FlightOption*> flights(request_.legs.size(), nullptr);
  std::vector<const HotelOption*> hotels(stays_.size(), nullptr);
  auto add = [&](std::string code, std::string message) {
    verdict.violations.push_back(Violation{std::move(code), std::move(message)});
  };
  for (const ChosenFlight& c : itinerary.flights) {
    const FlightOption* f = FindFlight(*inventory_, c.flight_id);
    if (f == nullptr) {
      add("flight.unknown", fmt::format("flight {} is not in the inventory", c.flight_id));
    } else if (c.leg < 0 || c.leg >= static_cast<int>(flights.size())) {
      add("flight.leg", fmt::format("flight {} assigned to missing leg {}", c.flight_id, c.leg + 1));
    } else if (flights[c.leg] != nullptr) {
      add("flight.extra", fmt::format("more than one flight for leg {}", c.leg + 1));
    } else {
      flights[c.leg] = f;
    }
  }
  for (const ChosenHotel& c : itinerary.hotels) {
    const HotelOption* h = FindHotel(*inventory_, c.hotel_id);
    if (h == nullptr) {
      add("hotel.unknown", fmt::format("hotel {} is not in the inventory", c.hotel_id));
    } else if (c.stay < 0 || c.stay >= static_cast<int>(hotels.size())) {
      add("hotel.stay", fmt::format("hotel {} assigned to missing stay {}", c.hotel_id, c.stay + 1));
    } else if (hotels[c.stay] != nullptr) {
      add("hotel.extra", fmt::format("more than one hotel for stay {}", c.stay + 1));
    } else {
      hotels[c.stay] = h;
      const Stay& stay = stays_[c.stay];
      if (c.first_night != stay.first_night || c.end != stay.end) {
        add("hotel.nights",
            fmt::format("hotel {} booked {}..{}, stay {} needs {}..{}", c.hotel_id,
                        c.first_night.ToString(), c.end.ToString(), c.stay + 1,
                        stay.first_night.ToString(), stay.end.ToString()));
      }
    }
  }
  Run(flights, hotels, &verdict);

  if (itinerary.timeline) {
    bool complete = true;
    for (const FlightOption* f : flights) {
      if (f == nullptr) {
        complete = false;
        continue;
      }
      const Leg s = SlotsOf(*f);
      complete = complete && s.depart_slot >= 0 && s.land_slot < num_slots_;
    }
    if (complete) CheckTimeline(*itinerary.timeline, flights, hotels, &verdict);
  }
  return verdict;
}

Verdict EvaluateCost(const Itinerary& itinerary, const SymbolicRequest& request,
                     const Inventory& inventory, const ModelParams& params) {
  return Simulator(request, inventory, params).Check(itinerary);
}

}  // namespace wayplan
