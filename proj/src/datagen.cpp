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

#include "wayplan/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "hash.hpp"
#include "wayplan/error.hpp"

namespace wayplan {
namespace {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  int Int(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(engine_); }
  int Int(IntRange r) { return Int(r.lo, r.hi); }
  double Real() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }
  double Real(double lo, double hi) { return lo + (hi - lo) * Real(); }
  bool Chance(double p) { return Real() < p; }
  double Normal() { return std::normal_distribution<double>(0.0, 1.0)(engine_); }

  template <typename T>
  const T& Pick(const std::vector<T>& items) {
    return items[static_cast<std::size_t>(Int(0, static_cast<int>(items.size()) - 1))];
  }

  // `count` distinct items, in sampled order.
  std::vector<std::string> Sample(const std::vector<std::string>& pool, int count) {
    std::vector<std::string> copy = pool;
    for (int i = 0; i < count; ++i) {
      std::swap(copy[i], copy[Int(i, static_cast<int>(copy.size()) - 1)]);
    }
    copy.resize(count);
    return copy;
  }

  template <typename T>
  void Shuffle(std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::swap(items[i - 1], items[static_cast<std::size_t>(Int(0, static_cast<int>(i) - 1))]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

CabinClass RandomCabin(Rng& rng) {
  const double r = rng.Real();
  if (r < 0.55) return CabinClass::kCoach;
  if (r < 0.7) return CabinClass::kPremium;
  if (r < 0.9) return CabinClass::kBusiness;
  return CabinClass::kFirst;
}

std::optional<bool> Flag(Rng& rng, double presence, double true_probability) {
  if (!rng.Chance(presence)) return std::nullopt;
  return rng.Chance(true_probability);
}

std::vector<LegWindow> RandomWindows(Rng& rng, int legs, int earliest_hour, int latest_hour) {
  std::vector<LegWindow> windows;
  for (int k = 0; k < legs; ++k) {
    if (rng.Chance(0.5)) windows.push_back(LegWindow{k, {}});
  }
  if (windows.empty()) windows.push_back(LegWindow{rng.Int(0, legs - 1), {}});
  for (LegWindow& w : windows) {
    const int start = rng.Int(earliest_hour, latest_hour) * 60 + (rng.Chance(0.25) ? 30 : 0);
    const int length = rng.Int(3, 8) * 60;
    w.window = TimeWindow{start, std::min(start + length, kMinutesPerDay)};
  }
  return windows;
}

int TotalNights(const SymbolicRequest& r) {
  int nights = 0;
  for (const Stay& s : StaysOf(r)) nights += std::max(0, s.nights());
  return nights;
}

Cents DollarsBetween(Rng& rng, int lo, int hi) { return Cents::Dollars(rng.Int(lo, hi)); }

// Uniform price with cents, e.g. $243.17.
Cents FarePrice(Rng& rng, int lo_dollars, int hi_dollars) {
  return Cents(std::int64_t{rng.Int(lo_dollars, hi_dollars)} * 100 + rng.Int(0, 99));
}

Cents Scaled(Cents cap, double fraction) {
  return Cents(std::max<std::int64_t>(1, static_cast<std::int64_t>(
                                             std::floor(cap.AsDouble() * fraction))));
}

const std::vector<std::string>& HotelNameSuffixes() {
  static const std::vector<std::string> kSuffixes = {
      "Downtown", "Airport", "Central", "Harbor", "Plaza", "Suites", "Riverside", "Midtown"};
  return kSuffixes;
}

}  // namespace

std::vector<std::pair<std::string, double>> PresenceTable(const PresenceProbs& p) {
  return {{"airline.price_total_max", p.price_total_max},
          {"airline.cabin_class", p.cabin_class},
          {"airline.refundable", p.refundable},
          {"airline.nonstop_only", p.nonstop_only},
          {"airline.must_not_basic_economy", p.must_not_basic_economy},
          {"airline.no_mixed_cabin", p.no_mixed_cabin},
          {"airline.avoid_red_eye", p.avoid_red_eye},
          {"airline.departure_time", p.departure_time},
          {"airline.arrival_time", p.arrival_time},
          {"airline.plane_types", p.plane_types},
          {"airline.preferred_airlines", p.preferred_airlines},
          {"hotel.daily_budget_max", p.daily_budget_max},
          {"hotel.total_budget_max", p.total_budget_max},
          {"hotel.min_rating", p.min_rating},
          {"hotel.brands", p.brands},
          {"budget.total_budget", p.total_budget},
          {"budget.everyday_budget", p.everyday_budget}};
}

const std::vector<std::string>& DefaultCityPool() {
  static const std::vector<std::string> kCities = {
      "ATL", "BOS", "CLT", "DEN", "DFW", "DTW", "EWR", "IAD", "JFK", "LAS",
      "LAX", "LGA", "MIA", "OAK", "ORD", "PHL", "SFO", "IAH", "SEA", "MSP"};
  return kCities;
}

const std::vector<std::string>& AirlinePool() {
  static const std::vector<std::string> kAirlines = {
      "Alaska Airlines", "American Airlines", "Delta", "Frontier Airlines",
      "JetBlue Airways", "Southwest", "Spirit Airlines", "United"};
  return kAirlines;
}

const std::vector<std::string>& PlaneTypePool() {
  static const std::vector<std::string> kPlanes = {
      "Airbus A320", "Airbus A321", "Boeing 737-800", "Boeing 757-200",
      "Boeing 787-9", "Embraer 175", "Canadair Regional Jet 900"};
  return kPlanes;
}

const std::vector<std::string>& HotelBrandPool() {
  static const std::vector<std::string> kBrands = {
      "Best Western", "Choice", "Hilton", "Hyatt", "IHG", "Marriott", "Radisson", "Wyndham"};
  return kBrands;
}

void ValidateGenParams(const GenParams& p) {
  auto bad = [](const std::string& path, const std::string& what) {
    throw Error(ErrorCode::kInvalidArgument, what, path);
  };
  auto probability = [&](double v, const std::string& path) {
    if (!(v >= 0.0 && v <= 1.0)) bad(path, "probability must lie in [0,1]");
  };
  probability(p.one_way_fraction, "one_way_fraction");
  probability(p.three_city_fraction, "three_city_fraction");
  probability(p.flag_true_probability, "flag_true_probability");
  for (const auto& [name, v] : PresenceTable(p.presence)) probability(v, "presence." + name);
  const auto& pool = p.city_pool.empty() ? DefaultCityPool() : p.city_pool;
  if (pool.size() < 3) bad("city_pool", "need at least 3 cities");
  if (std::set<std::string>(pool.begin(), pool.end()).size() != pool.size()) {
    bad("city_pool", "cities must be distinct");
  }
  for (const std::string& c : pool) {
    if (!IsAirportCode(c)) bad("city_pool", "'" + c + "' is not an airport code");
  }
  for (const auto& [range, path] :
       {std::pair{p.leg_gap_days, "leg_gap_days"}, std::pair{p.flights_per_leg, "flights_per_leg"},
        std::pair{p.hotels_per_city, "hotels_per_city"}}) {
    if (range.lo > range.hi) bad(path, "range is empty");
  }
  if (p.leg_gap_days.lo < 0) bad("leg_gap_days", "gaps must be >= 0");
  if (p.flights_per_leg.lo < 1) bad("flights_per_leg", "need at least one flight per leg");
  if (p.hotels_per_city.lo < 1) bad("hotels_per_city", "need at least one hotel per city");
  if ((p.horizon_end - p.horizon_begin) < 2 * p.leg_gap_days.hi) {
    bad("date_horizon", "horizon is shorter than the longest trip");
  }
  if (!(p.price_noise_sigma >= 0)) bad("price_noise_sigma", "must be >= 0");
}

SymbolicRequest GenRequest(const GenParams& params, std::int64_t index) {
  Rng rng(SplitMix(params.rng_seed ^ SplitMix(static_cast<std::uint64_t>(index))));
  const auto& pool = params.city_pool.empty() ? DefaultCityPool() : params.city_pool;
  const PresenceProbs& pr = params.presence;

  SymbolicRequest r;
  const bool one_way = rng.Chance(params.one_way_fraction);
  const int cities = one_way ? 2 : (rng.Chance(params.three_city_fraction) ? 3 : 2);
  const std::vector<std::string> stops = rng.Sample(pool, cities);
  const int num_legs = one_way ? 1 : cities;
  std::vector<int> gaps;
  int span = 0;
  for (int k = 0; k + 1 < num_legs; ++k) {
    gaps.push_back(rng.Int(params.leg_gap_days));
    span += gaps.back();
  }
  const int slack = (params.horizon_end - params.horizon_begin) - span;
  Date date = params.horizon_begin + rng.Int(0, std::max(0, slack));
  for (int k = 0; k < num_legs; ++k) {
    if (k > 0) date = date + gaps[k - 1];
    r.legs.push_back(TripLeg{date, stops[k], stops[(k + 1) % cities]});
  }
  r.trip_kind = one_way ? TripKind::kOneWay : TripKind::kRoundTrip;
  const int nights = std::max(1, TotalNights(r));

  AirlineConstraints& a = r.airline;
  const double t = params.flag_true_probability;
  if (rng.Chance(pr.price_total_max)) a.price_total_max = DollarsBetween(rng, 220 * num_legs, 650 * num_legs);
  if (rng.Chance(pr.cabin_class)) a.cabin_class = RandomCabin(rng);
  a.refundable = Flag(rng, pr.refundable, t);
  a.nonstop_only = Flag(rng, pr.nonstop_only, t);
  a.must_not_basic_economy = Flag(rng, pr.must_not_basic_economy, t);
  a.no_mixed_cabin = Flag(rng, pr.no_mixed_cabin, t);
  a.avoid_red_eye = Flag(rng, pr.avoid_red_eye, t);
  if (rng.Chance(pr.departure_time)) a.departure_time = RandomWindows(rng, num_legs, 5, 16);
  if (rng.Chance(pr.arrival_time)) a.arrival_time = RandomWindows(rng, num_legs, 8, 18);
  if (rng.Chance(pr.plane_types)) a.plane_types = rng.Sample(PlaneTypePool(), rng.Int(1, 2));
  if (rng.Chance(pr.preferred_airlines)) {
    a.preferred_airlines = rng.Sample(AirlinePool(), rng.Int(1, 3));
  }

  HotelConstraints& h = r.hotel;
  if (rng.Chance(pr.daily_budget_max)) h.daily_budget_max = DollarsBetween(rng, 120, 400);
  if (rng.Chance(pr.total_budget_max)) {
    h.total_budget_max = DollarsBetween(rng, 100 * nights, 380 * nights);
  }
  if (rng.Chance(pr.min_rating)) h.min_rating = Rating(rng.Int(6, 9) * 5);
  if (rng.Chance(pr.brands)) h.brands = rng.Sample(HotelBrandPool(), rng.Int(1, 3));

  BudgetConstraints& b = r.budget;
  if (rng.Chance(pr.total_budget)) {
    b.total_budget = DollarsBetween(rng, 250 * num_legs + 130 * nights,
                                    650 * num_legs + 400 * nights);
  }
  if (rng.Chance(pr.everyday_budget)) b.everyday_budget = DollarsBetween(rng, 130, 450);
  return Canonicalize(std::move(r));
}

namespace {

// Decoy flight for `leg`, drawn from the base table when it serves the route.
FlightOption DecoyFlight(Rng& rng, const TripLeg& leg, const BaseFlightTable* base) {
  if (base != nullptr) {
    std::vector<const FlightOption*> route;
    for (const FlightOption& f : base->rows) {
      if (f.origin == leg.origin && f.destination == leg.destination &&
          f.arrival.date() == f.departure.date()) {
        route.push_back(&f);
      }
    }
    if (!route.empty()) {
      FlightOption f = *rng.Pick(route);
      const std::int64_t duration = f.arrival - f.departure;
      f.departure = DateTime::At(leg.date, f.departure.minute_of_day());
      f.arrival = f.departure + duration;
      return f;
    }
  }
  FlightOption f;
  f.origin = leg.origin;
  f.destination = leg.destination;
  f.is_nonstop = rng.Chance(0.6);
  const int duration = f.is_nonstop ? rng.Int(12, 66) * 5 : rng.Int(30, 84) * 5;
  int depart = rng.Int(0, 240) * 5;
  depart = std::min(depart, 22 * 60 - duration);
  f.departure = DateTime::At(leg.date, depart);
  f.arrival = f.departure + duration;
  f.price = FarePrice(rng, 80, 800);
  f.cabin_class = RandomCabin(rng);
  f.is_basic_economy = f.cabin_class == CabinClass::kCoach && rng.Chance(0.35);
  f.is_mixed_cabin = !f.is_nonstop && rng.Chance(0.4);
  f.refundable = rng.Chance(0.35);
  f.airline = rng.Pick(AirlinePool());
  f.plane_type = rng.Pick(PlaneTypePool());
  return f;
}

HotelOption DecoyHotel(Rng& rng, const Stay& stay) {
  HotelOption h;
  h.city = stay.city;
  h.brand = rng.Pick(HotelBrandPool());
  h.name = fmt::format("{} {} {}", h.brand, stay.city, rng.Pick(HotelNameSuffixes()));
  h.rating = Rating(rng.Int(2, 10) * 5);
  h.price_per_night = DollarsBetween(rng, 60, 550);
  h.earliest_checkin = rng.Int(13, 16) * 60;
  h.latest_checkout = rng.Int(10, 12) * 60;
  if (rng.Chance(0.85)) {
    h.available_from = stay.first_night - rng.Int(0, 5);
    h.available_to = stay.end - 1 + rng.Int(0, 5);
  } else {
    // Opens partway through the stay.
    h.available_from = stay.first_night + rng.Int(1, 3);
    h.available_to = h.available_from + rng.Int(0, 6);
  }
  return h;
}

}  // namespace

Inventory GenInventory(const GenParams& params, const SymbolicRequest& request) {
  Rng rng(SplitMix(params.rng_seed ^ Fnv1a(SerializeRequest(request))));
  const AirlineConstraints& a = request.airline;
  const int num_legs = static_cast<int>(request.legs.size());
  const std::vector<Stay> stays = StaysOf(request);
  const int nights = std::max(1, TotalNights(request));

  // Per-leg and per-night price ceilings that keep the planted plan in budget.
  std::optional<Cents> flight_cap;
  auto tighten = [](std::optional<Cents>& cap, Cents value) {
    if (!cap || value < *cap) cap = value;
  };
  if (a.price_total_max) tighten(flight_cap, Cents(a.price_total_max->value() / num_legs));
  if (request.budget.total_budget) {
    tighten(flight_cap, Cents(request.budget.total_budget->value() / 2 / num_legs));
  }
  std::optional<Cents> night_cap;
  if (request.hotel.daily_budget_max) tighten(night_cap, *request.hotel.daily_budget_max);
  if (request.budget.everyday_budget) tighten(night_cap, *request.budget.everyday_budget);
  if (request.hotel.total_budget_max) {
    tighten(night_cap, Cents(request.hotel.total_budget_max->value() / nights));
  }
  if (request.budget.total_budget) {
    tighten(night_cap, Cents(request.budget.total_budget->value() * 45 / 100 / nights));
  }

  Inventory inv;
  for (int k = 0; k < num_legs; ++k) {
    const TripLeg& leg = request.legs[k];
    const int count = rng.Int(params.flights_per_leg);
    FlightOption planted;
    planted.origin = leg.origin;
    planted.destination = leg.destination;
    const int depart = rng.Int(7 * 12, 15 * 12) * 5;
    const int duration = std::min(rng.Int(18, 72) * 5, 21 * 60 - depart);
    planted.departure = DateTime::At(leg.date, depart);
    planted.arrival = planted.departure + duration;
    planted.price = FarePrice(rng, 120, 420);
    if (flight_cap) {
      planted.price = std::min(planted.price, Scaled(*flight_cap, rng.Real(0.6, 0.95)));
    }
    planted.cabin_class = a.cabin_class.value_or(RandomCabin(rng));
    planted.refundable = a.refundable == true || rng.Chance(0.3);
    planted.is_nonstop = a.nonstop_only == true || rng.Chance(0.6);
    planted.is_basic_economy = a.must_not_basic_economy != true &&
                               planted.cabin_class == CabinClass::kCoach && rng.Chance(0.3);
    planted.is_mixed_cabin = a.no_mixed_cabin != true && !planted.is_nonstop && rng.Chance(0.3);
    planted.airline = a.preferred_airlines ? rng.Pick(*a.preferred_airlines) : rng.Pick(AirlinePool());
    planted.plane_type = a.plane_types ? rng.Pick(*a.plane_types) : rng.Pick(PlaneTypePool());
    inv.flights.push_back(std::move(planted));
    for (int i = 1; i < count; ++i) inv.flights.push_back(DecoyFlight(rng, leg, params.base));
  }

  for (const Stay& stay : stays) {
    if (stay.nights() <= 0) continue;
    const int count = rng.Int(params.hotels_per_city);
    HotelOption planted;
    planted.city = stay.city;
    planted.brand = request.hotel.brands ? rng.Pick(*request.hotel.brands) : rng.Pick(HotelBrandPool());
    planted.name = fmt::format("{} {} {}", planted.brand, stay.city, rng.Pick(HotelNameSuffixes()));
    const int min_tenths = request.hotel.min_rating ? request.hotel.min_rating->tenths() : 25;
    planted.rating = Rating(std::min(50, rng.Int((min_tenths + 4) / 5, 10) * 5));
    planted.price_per_night = DollarsBetween(rng, 90, 300);
    if (night_cap) {
      planted.price_per_night =
          std::min(planted.price_per_night, Scaled(*night_cap, rng.Real(0.6, 0.95)));
    }
    planted.earliest_checkin = rng.Int(14, 16) * 60;
    planted.latest_checkout = rng.Int(10, 12) * 60;
    planted.available_from = stay.first_night - rng.Int(0, 5);
    planted.available_to = stay.end - 1 + rng.Int(0, 5);

    std::vector<HotelOption> decoys;
    for (int i = 1; i < count; ++i) decoys.push_back(DecoyHotel(rng, stay));
    decoys = PerturbHotels(decoys, params.price_noise_sigma, rng.Int(0, 1 << 30));
    inv.hotels.push_back(std::move(planted));
    for (HotelOption& h : decoys) inv.hotels.push_back(std::move(h));
  }

  rng.Shuffle(inv.flights);
  rng.Shuffle(inv.hotels);
  for (std::size_t i = 0; i < inv.flights.size(); ++i) inv.flights[i].id = fmt::format("F{:03}", i + 1);
  for (std::size_t i = 0; i < inv.hotels.size(); ++i) inv.hotels[i].id = fmt::format("H{:03}", i + 1);
  return inv;
}

std::vector<HotelOption> PerturbHotels(const std::vector<HotelOption>& hotels, double sigma,
                                       std::uint64_t seed) {
  Rng rng(SplitMix(seed));
  std::vector<HotelOption> out = hotels;
  for (HotelOption& h : out) {
    // Mean-preserving lognormal factor.
    const double factor = std::exp(sigma * rng.Normal() - sigma * sigma / 2);
    const auto cents = static_cast<std::int64_t>(std::llround(h.price_per_night.AsDouble() * factor));
    h.price_per_night = Cents(std::max<std::int64_t>(1, cents));
  }
  return out;
}

// ---------------------------------------------------------------------------
// CSV ingestion.

namespace {

// Splits RFC 4180 text into records; quoted fields may hold commas, quotes
// and newlines.
std::vector<std::vector<std::string>> ParseCsv(std::string_view text) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false;
  bool any = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field.push_back(c);
      }
      continue;
    }
    if (c == '"') {
      quoted = true;
      any = true;
    } else if (c == ',') {
      row.push_back(std::move(field));
      field.clear();
      any = true;
    } else if (c == '\n' || c == '\r') {
      if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      if (any || !field.empty()) {
        row.push_back(std::move(field));
        records.push_back(std::move(row));
      }
      row.clear();
      field.clear();
      any = false;
    } else {
      field.push_back(c);
      any = true;
    }
  }
  if (any || !field.empty()) {
    row.push_back(std::move(field));
    records.push_back(std::move(row));
  }
  return records;
}

std::vector<std::string_view> Segments(std::string_view value) {
  std::vector<std::string_view> parts;
  std::size_t pos = 0;
  while (true) {
    const std::size_t next = value.find("||", pos);
    parts.push_back(value.substr(pos, next == std::string_view::npos ? next : next - pos));
    if (next == std::string_view::npos) break;
    pos = next + 2;
  }
  return parts;
}

std::string_view Trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::optional<bool> ParseBool(std::string_view s) {
  std::string lower;
  for (char c : Trim(s)) lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  if (lower == "true" || lower == "1" || lower == "yes") return true;
  if (lower == "false" || lower == "0" || lower == "no") return false;
  return std::nullopt;
}

std::optional<CabinClass> ParseCabinLoose(std::string_view s) {
  std::string lower;
  for (char c : Trim(s)) lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  if (lower == "coach" || lower == "economy") return CabinClass::kCoach;
  if (lower == "premium" || lower == "premium coach" || lower == "premium economy") {
    return CabinClass::kPremium;
  }
  if (lower == "business") return CabinClass::kBusiness;
  if (lower == "first") return CabinClass::kFirst;
  return std::nullopt;
}

const std::vector<std::string>& FlightFields() {
  static const std::vector<std::string> kFields = {
      "id", "origin", "destination", "departure", "arrival", "price", "cabin_class",
      "is_basic_economy", "is_mixed_cabin", "is_nonstop", "airline", "plane_type",
      "refundable"};
  return kFields;
}

}  // namespace

ColumnMap DefaultColumnMap() {
  return {{"id", "legId"},
          {"origin", "startingAirport"},
          {"destination", "destinationAirport"},
          {"departure", "segmentsDepartureTimeRaw"},
          {"arrival", "segmentsArrivalTimeRaw"},
          {"price", "totalFare"},
          {"cabin_class", "segmentsCabinCode"},
          {"is_basic_economy", "isBasicEconomy"},
          {"is_nonstop", "isNonStop"},
          {"airline", "segmentsAirlineName"},
          {"plane_type", "segmentsEquipmentDescription"},
          {"refundable", "isRefundable"}};
}

ColumnMap ColumnMapFromJson(const nlohmann::json& j) {
  if (!j.is_object()) throw Error(ErrorCode::kSchemaViolation, "column map must be an object", "");
  ColumnMap map;
  for (const auto& [key, value] : j.items()) {
    if (std::find(FlightFields().begin(), FlightFields().end(), key) == FlightFields().end()) {
      throw Error(ErrorCode::kSchemaViolation, "unknown flight field '" + key + "'", "/" + key);
    }
    if (!value.is_string()) {
      throw Error(ErrorCode::kSchemaViolation, "column name must be a string", "/" + key);
    }
    map[key] = value.get<std::string>();
  }
  return map;
}

BaseFlightTable IngestFlightCsvText(std::string_view text, const ColumnMap& columns) {
  const auto records = ParseCsv(text);
  std::map<std::string, std::size_t> header;
  if (!records.empty()) {
    for (std::size_t i = 0; i < records[0].size(); ++i) {
      header[std::string(Trim(records[0][i]))] = i;
    }
  }
  std::map<std::string, std::size_t> source;
  std::vector<std::string> missing;
  for (const std::string& field : FlightFields()) {
    auto it = columns.find(field);
    if (it == columns.end()) continue;
    auto col = header.find(it->second);
    if (col != header.end()) source[field] = col->second;
  }
  for (const char* required : {"origin", "destination", "departure", "arrival", "price"}) {
    if (!source.count(required)) missing.emplace_back(required);
  }
  if (!missing.empty()) {
    std::string list;
    for (const std::string& m : missing) list += (list.empty() ? "" : ", ") + m;
    throw Error(ErrorCode::kMappingIncomplete,
                "no source column for required field(s): " + list);
  }

  BaseFlightTable table;
  std::map<std::string, int> id_uses;
  auto skip = [&](std::size_t line, const std::string& why) {
    ++table.skipped;
    if (table.skip_reasons.size() < 100) {
      table.skip_reasons.push_back(fmt::format("line {}: {}", line, why));
    }
  };
  for (std::size_t r = 1; r < records.size(); ++r) {
    const auto& rec = records[r];
    const std::size_t line = r + 1;
    auto get = [&](const std::string& field) -> std::optional<std::string_view> {
      auto it = source.find(field);
      if (it == source.end() || it->second >= rec.size()) return std::nullopt;
      return Trim(rec[it->second]);
    };
    try {
      FlightOption f;
      f.origin = std::string(*get("origin"));
      f.destination = std::string(*get("destination"));
      const auto dep_segments = Segments(get("departure").value_or(""));
      const auto arr_segments = Segments(get("arrival").value_or(""));
      const auto dep = DateTime::Parse(Trim(dep_segments.front()));
      const auto arr = DateTime::Parse(Trim(arr_segments.back()));
      if (!dep || !arr) {
        skip(line, "unparsable departure or arrival time");
        continue;
      }
      f.departure = *dep;
      f.arrival = *arr;
      const std::string price_text(get("price").value_or(""));
      char* end = nullptr;
      const double dollars = std::strtod(price_text.c_str(), &end);
      if (price_text.empty() || end != price_text.c_str() + price_text.size()) {
        skip(line, "unparsable price");
        continue;
      }
      f.price = Cents(std::llround(dollars * 100));
      f.is_nonstop = dep_segments.size() == 1;
      if (auto v = get("is_nonstop")) {
        if (auto b = ParseBool(*v)) f.is_nonstop = *b;
      }
      if (auto v = get("cabin_class")) {
        const auto cabins = Segments(*v);
        if (auto c = ParseCabinLoose(cabins.front())) f.cabin_class = *c;
        for (std::string_view s : cabins) {
          if (ParseCabinLoose(s) != ParseCabinLoose(cabins.front())) f.is_mixed_cabin = true;
        }
      }
      if (auto v = get("is_mixed_cabin")) {
        if (auto b = ParseBool(*v)) f.is_mixed_cabin = *b;
      }
      if (auto v = get("is_basic_economy")) f.is_basic_economy = ParseBool(*v).value_or(false);
      if (auto v = get("refundable")) f.refundable = ParseBool(*v).value_or(false);
      if (auto v = get("airline")) f.airline = std::string(Trim(Segments(*v).front()));
      if (auto v = get("plane_type")) f.plane_type = std::string(Trim(Segments(*v).front()));
      std::string id = std::string(get("id").value_or(""));
      if (id.empty()) id = fmt::format("row{}", line);
      if (const int uses = id_uses[id]++; uses > 0) id = fmt::format("{}#{}", id, uses);
      f.id = std::move(id);
      ValidateFlight(f, fmt::format("line {}", line));
      table.rows.push_back(std::move(f));
    } catch (const Error& e) {
      skip(line, e.what());
    }
  }
  if (table.rows.empty()) {
    throw Error(ErrorCode::kInvalidArgument,
                fmt::format("no valid flight rows ({} skipped)", table.skipped));
  }
  table.span_begin = table.span_end = table.rows.front().departure.date();
  for (const FlightOption& f : table.rows) {
    table.span_begin = std::min(table.span_begin, f.departure.date());
    table.span_end = std::max(table.span_end, f.departure.date());
  }
  return table;
}

BaseFlightTable IngestFlightCsv(const std::string& path, const ColumnMap& columns) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kFileUnreadable, "cannot read '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return IngestFlightCsvText(buffer.str(), columns);
}

BaseFlightTable ReplicateDates(const BaseFlightTable& table, Date begin, Date end) {
  if (table.rows.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "cannot replicate an empty table");
  }
  const int span = table.span_end - table.span_begin + 1;
  auto floor_div = [](int a, int b) { return a >= 0 ? a / b : -((-a + b - 1) / b); };
  const int first = floor_div(begin - table.span_begin, span) - 1;
  const int last = floor_div(end - table.span_begin, span) + 1;
  BaseFlightTable out;
  out.span_begin = begin;
  out.span_end = end;
  for (int k = first; k <= last; ++k) {
    const std::int64_t shift = std::int64_t{k} * span * kMinutesPerDay;
    for (const FlightOption& f : table.rows) {
      const DateTime dep = f.departure + shift;
      if (dep.date() < begin || end < dep.date()) continue;
      FlightOption copy = f;
      copy.departure = dep;
      copy.arrival = f.arrival + shift;
      copy.id = fmt::format("{}~{}", f.id, k);
      out.rows.push_back(std::move(copy));
    }
  }
  return out;
}

}  // namespace wayplan
