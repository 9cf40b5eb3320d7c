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

#include "wayplan/milp.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "wayplan/error.hpp"

namespace wayplan {
namespace {

std::int64_t FloorDiv(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

std::int64_t CeilDiv(std::int64_t a, std::int64_t b) {
  return -FloorDiv(-a, b);
}

std::string Sanitize(std::string_view id) {
  std::string out;
  out.reserve(id.size());
  for (char c : id) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                    (c >= '0' && c <= '9') || c == '_';
    out.push_back(ok ? c : '_');
  }
  return out;
}

// Collects terms of a linear form plus a constant, then emits a row.
class Linear {
 public:
  void Add(int var, double coef) { terms_.push_back(Term{var, coef}); }
  void AddConstant(double c) { constant_ += c; }
  void AddOperand(const Operand& op, double sign) {
    if (op.var) {
      Add(*op.var, sign);
    } else {
      AddConstant(sign * op.constant);
    }
  }
  // Emits `terms + constant <sense> rhs` with the constant moved right.
  LinearConstraint Emit(std::string name, Sense sense, double rhs) && {
    std::sort(terms_.begin(), terms_.end(),
              [](const Term& a, const Term& b) { return a.var < b.var; });
    std::vector<Term> merged;
    for (const Term& t : terms_) {
      if (!merged.empty() && merged.back().var == t.var) {
        merged.back().coef += t.coef;
      } else {
        merged.push_back(t);
      }
    }
    std::erase_if(merged, [](const Term& t) { return t.coef == 0.0; });
    LinearConstraint c;
    c.name = std::move(name);
    c.terms = std::move(merged);
    c.sense = sense;
    c.rhs = rhs - constant_;
    return c;
  }

 private:
  std::vector<Term> terms_;
  double constant_ = 0;
};

double OperandMin(const Operand& op) { return op.var ? 0.0 : op.constant; }
double OperandMax(const Operand& op) { return op.var ? 1.0 : op.constant; }

// x - y - M * sum(1 - z) <= 0 as a Linear form.
Linear ImplicationSide(std::span<const Literal> z, const Operand& x,
                       const Operand& y, double big_m) {
  Linear lin;
  lin.AddOperand(x, 1.0);
  lin.AddOperand(y, -1.0);
  for (const Literal& lit : z) {
    if (lit.negated) {
      // The literal is 1 - v, so its slack 1 - (1 - v) is v.
      lin.Add(lit.var, -big_m);
    } else {
      lin.Add(lit.var, big_m);
      lin.AddConstant(-big_m);
    }
  }
  return lin;
}

void CheckBigM(double big_m, double gap) {
  if (big_m + 1e-12 < gap) {
    throw Error(ErrorCode::kMTooSmall,
                fmt::format("big-M {} is below the attainable gap {}", big_m, gap));
  }
}

int CabinRank(CabinClass c) { return static_cast<int>(c); }

}  // namespace

TimeGrid::TimeGrid(Date first_day, int days, const GridOptions& options)
    : first_day_(first_day), days_(days), slot_minutes_(options.slot_minutes) {
  const std::int64_t sm = slot_minutes_;
  for (int n = 0; n + 1 < days_; ++n) {
    std::int64_t start = std::int64_t{n} * kMinutesPerDay + options.night_start;
    std::int64_t stop = std::int64_t{n + 1} * kMinutesPerDay + options.night_end;
    if (options.night_start <= options.night_end) {
      start += kMinutesPerDay;
    }
    nights_.push_back(SlotRange{static_cast<int>(CeilDiv(start, sm)),
                                static_cast<int>(FloorDiv(stop, sm))});
  }
}

int TimeGrid::FloorSlot(DateTime time) const {
  return static_cast<int>(FloorDiv(time - origin(), slot_minutes_));
}

int TimeGrid::CeilSlot(DateTime time) const {
  return static_cast<int>(CeilDiv(time - origin(), slot_minutes_));
}

DateTime TimeGrid::SlotStart(int slot) const {
  return origin() + std::int64_t{slot} * slot_minutes_;
}

TimeGrid BuildTimeGrid(const SymbolicRequest& request, const GridOptions& options) {
  if (options.slot_minutes <= 0 || kMinutesPerDay % options.slot_minutes != 0) {
    throw Error(ErrorCode::kInvalidArgument,
                fmt::format("slot_minutes {} must divide a day", options.slot_minutes));
  }
  if (request.legs.empty()) {
    throw Error(ErrorCode::kInvariantViolation, "request has no legs", "legs");
  }
  const Date first = request.legs.front().date;
  const int days = (request.legs.back().date - first) + 1;
  if (days > options.max_span_days) {
    throw Error(ErrorCode::kSpanTooLong,
                fmt::format("trip spans {} days, limit is {}", days,
                            options.max_span_days));
  }
  return TimeGrid(first, days, options);
}

std::string_view ObjectiveModeName(ObjectiveMode mode) {
  switch (mode) {
    case ObjectiveMode::kMinCost: return "min_cost";
    case ObjectiveMode::kBetterHotel: return "better_hotel";
    case ObjectiveMode::kBetterFlight: return "better_flight";
  }
  return "min_cost";
}

std::optional<ObjectiveMode> ParseObjectiveMode(std::string_view name) {
  if (name == "min_cost") return ObjectiveMode::kMinCost;
  if (name == "better_hotel") return ObjectiveMode::kBetterHotel;
  if (name == "better_flight") return ObjectiveMode::kBetterFlight;
  return std::nullopt;
}

void ValidateModelParams(const ModelParams& p) {
  auto bad = [](const std::string& what) {
    throw Error(ErrorCode::kInvalidArgument, what);
  };
  if (p.grid.slot_minutes <= 0 || kMinutesPerDay % p.grid.slot_minutes != 0) {
    bad("slot_minutes must be positive and divide 1440");
  }
  if (p.grid.max_span_days < 1) bad("max_span_days must be >= 1");
  if (p.grid.night_start < 0 || p.grid.night_start >= kMinutesPerDay ||
      p.grid.night_end < 0 || p.grid.night_end >= kMinutesPerDay) {
    bad("night window must use valid times of day");
  }
  if (p.min_sleep_slots < 1) bad("min_sleep_slots must be >= 1");
  const int night_minutes = p.grid.night_start > p.grid.night_end
                                ? kMinutesPerDay - p.grid.night_start + p.grid.night_end
                                : p.grid.night_end - p.grid.night_start;
  if (p.grid.slot_minutes > 0 &&
      p.min_sleep_slots > night_minutes / p.grid.slot_minutes) {
    bad("min_sleep_slots exceeds the slots in the night window");
  }
  if (p.big_m < 1.0) bad("big_m must be >= 1 for binary implications");
  if (p.soft_penalty_per_slot.value() < 0) bad("soft_penalty_per_slot must be >= 0");
  for (const ModeWeights* w : {&p.better_hotel, &p.better_flight}) {
    if (!(w->flight > 0) || !(w->hotel > 0)) bad("mode weights must be positive");
  }
  if (p.hotel_rating_bonus.value() < 0 || p.flight_quality_bonus.value() < 0) {
    bad("bonus terms must be >= 0");
  }
}

FlightSlots FlightSlotsOf(const FlightOption& flight, const TimeGrid& grid) {
  FlightSlots s;
  s.depart = grid.FloorSlot(flight.departure);
  s.land = std::max(grid.CeilSlot(flight.arrival), s.depart + 2);
  return s;
}

bool FitsGrid(const FlightSlots& s, const TimeGrid& grid) {
  return s.depart >= 0 && s.land < grid.num_slots();
}

std::vector<int> HotelCoverage(const HotelOption& hotel, const Stay& stay,
                               const TimeGrid& grid) {
  std::vector<int> slots;
  for (Date night = stay.first_night; night < stay.end; night = night + 1) {
    const int begin = std::max(0, grid.CeilSlot(DateTime::At(night, hotel.earliest_checkin)));
    const int end = std::min(grid.num_slots(),
                             grid.FloorSlot(DateTime::At(night + 1, hotel.latest_checkout)));
    for (int t = begin; t < end; ++t) slots.push_back(t);
  }
  std::sort(slots.begin(), slots.end());
  slots.erase(std::unique(slots.begin(), slots.end()), slots.end());
  return slots;
}

bool IsRedEye(const FlightOption& flight, const ModelParams& params) {
  const int tod = flight.departure.minute_of_day();
  if (params.red_eye_start > params.red_eye_end) {
    return tod >= params.red_eye_start || tod < params.red_eye_end;
  }
  return tod >= params.red_eye_start && tod < params.red_eye_end;
}

Cents SoftPenalty(const FlightOption& flight, int leg,
                  const SymbolicRequest& request, const ModelParams& params) {
  auto deviation_slots = [&](const std::optional<std::vector<LegWindow>>& windows,
                             int tod) -> std::int64_t {
    if (!windows) return 0;
    for (const LegWindow& w : *windows) {
      if (w.leg != leg) continue;
      int minutes = 0;
      if (tod < w.window.start) {
        minutes = w.window.start - tod;
      } else if (tod >= w.window.end) {
        minutes = tod - w.window.end + 1;
      }
      return CeilDiv(minutes, params.grid.slot_minutes);
    }
    return 0;
  };
  const std::int64_t slots =
      deviation_slots(request.airline.departure_time, flight.departure.minute_of_day()) +
      deviation_slots(request.airline.arrival_time, flight.arrival.minute_of_day());
  return params.soft_penalty_per_slot * slots;
}

Inventory PrefilterOptions(const SymbolicRequest& request, const Inventory& inventory,
                           const ModelParams& params) {
  const AirlineConstraints& a = request.airline;
  auto in_set = [](const std::optional<std::vector<std::string>>& set,
                   const std::string& value) {
    return !set || std::binary_search(set->begin(), set->end(), value);
  };
  Inventory out;
  for (const FlightOption& f : inventory.flights) {
    if (a.cabin_class && f.cabin_class != *a.cabin_class) continue;
    if (a.refundable.value_or(false) && !f.refundable) continue;
    if (a.nonstop_only.value_or(false) && !f.is_nonstop) continue;
    if (a.must_not_basic_economy.value_or(false) && f.is_basic_economy) continue;
    if (a.no_mixed_cabin.value_or(false) && f.is_mixed_cabin) continue;
    if (a.avoid_red_eye.value_or(false) && IsRedEye(f, params)) continue;
    if (!in_set(a.plane_types, f.plane_type)) continue;
    if (!in_set(a.preferred_airlines, f.airline)) continue;
    out.flights.push_back(f);
  }
  for (const HotelOption& h : inventory.hotels) {
    if (request.hotel.min_rating && h.rating < *request.hotel.min_rating) continue;
    if (!in_set(request.hotel.brands, h.brand)) continue;
    out.hotels.push_back(h);
  }
  return out;
}

std::string_view VarRoleName(VarRole role) {
  switch (role) {
    case VarRole::kLocation: return "u";
    case VarRole::kAsleep: return "m";
    case VarRole::kEvent: return "e";
    case VarRole::kFlight: return "f";
    case VarRole::kHotel: return "h";
    case VarRole::kPenalty: return "aux";
  }
  return "?";
}

double LinearConstraint::Activity(std::span<const std::uint8_t> x) const {
  double sum = 0;
  for (const Term& t : terms) sum += t.coef * x[t.var];
  return sum;
}

bool LinearConstraint::IsSatisfied(std::span<const std::uint8_t> x, double tol) const {
  const double act = Activity(x);
  switch (sense) {
    case Sense::kLessEqual: return act <= rhs + tol;
    case Sense::kGreaterEqual: return act >= rhs - tol;
    case Sense::kEqual: return std::abs(act - rhs) <= tol;
  }
  return false;
}

std::array<LinearConstraint, 2> EncodeImplication(std::span<const Literal> z,
                                                  Operand x, Operand y,
                                                  double big_m,
                                                  std::string_view name) {
  const double gap = std::max(std::abs(OperandMax(x) - OperandMin(y)),
                              std::abs(OperandMax(y) - OperandMin(x)));
  CheckBigM(big_m, gap);
  const std::string base(name);
  return {ImplicationSide(z, x, y, big_m).Emit(base + "_a", Sense::kLessEqual, 0),
          ImplicationSide(z, y, x, big_m).Emit(base + "_b", Sense::kLessEqual, 0)};
}

LinearConstraint EncodeConditionalLessEqual(std::span<const Literal> z,
                                            Operand x, Operand y, double big_m,
                                            std::string_view name) {
  CheckBigM(big_m, std::max(0.0, OperandMax(x) - OperandMin(y)));
  return ImplicationSide(z, x, y, big_m).Emit(std::string(name), Sense::kLessEqual, 0);
}

int MilpModel::AddVariable(Variable var, double objective) {
  const int index = static_cast<int>(variables_.size());
  index_.emplace(var.name, index);
  variables_.push_back(std::move(var));
  objective_.push_back(objective);
  return index;
}

void MilpModel::AddConstraint(LinearConstraint constraint) {
  constraints_.push_back(std::move(constraint));
}

std::optional<int> MilpModel::FindVariable(std::string_view name) const {
  auto it = index_.find(name);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

double MilpModel::ObjectiveValue(std::span<const std::uint8_t> x) const {
  double sum = 0;
  for (std::size_t v = 0; v < objective_.size(); ++v) {
    if (x[v]) sum += objective_[v];
  }
  return sum;
}

std::vector<std::string> MilpModel::Violations(std::span<const std::uint8_t> x) const {
  std::vector<std::string> out;
  for (const LinearConstraint& c : constraints_) {
    if (!c.IsSatisfied(x)) out.push_back(c.name);
  }
  return out;
}

std::map<std::string, int> MilpModel::CountByFamily() const {
  std::map<std::string, int> counts;
  for (const LinearConstraint& c : constraints_) ++counts[c.family];
  return counts;
}

double FlightObjectiveCoef(const FlightOption& f, const ModelParams& p) {
  const double price = f.price.AsDouble();
  switch (p.mode) {
    case ObjectiveMode::kMinCost: return price;
    case ObjectiveMode::kBetterHotel: return p.better_hotel.flight * price;
    case ObjectiveMode::kBetterFlight: {
      const int quality = CabinRank(f.cabin_class) + (f.is_nonstop ? 1 : 0);
      return p.better_flight.flight * price -
             p.flight_quality_bonus.AsDouble() * quality;
    }
  }
  return price;
}

double HotelObjectiveCoef(const HotelOption& h, int nights, const ModelParams& p) {
  const double cost = h.price_per_night.AsDouble() * nights;
  switch (p.mode) {
    case ObjectiveMode::kMinCost: return cost;
    case ObjectiveMode::kBetterHotel:
      return p.better_hotel.hotel * cost -
             p.hotel_rating_bonus.AsDouble() * h.rating.tenths() / 10.0 * nights;
    case ObjectiveMode::kBetterFlight: return p.better_flight.hotel * cost;
  }
  return cost;
}

MilpModel BuildModel(const SymbolicRequest& request, const Inventory& inventory,
                     const ModelParams& params) {
  ValidateModelParams(params);
  MilpModel model;
  model.grid = BuildTimeGrid(request, params.grid);
  const TimeGrid& grid = model.grid;
  const int T = grid.num_slots();
  const double M = params.big_m;

  model.locations = CitiesOf(request);
  model.locations.push_back(kAirLocation);
  const int num_locations = static_cast<int>(model.locations.size());
  const int air = model.air_location();

  model.u_base_ = 0;
  for (int l = 0; l < num_locations; ++l) {
    for (int t = 0; t < T; ++t) {
      Variable v;
      v.name = fmt::format("u_{}_{}", model.locations[l], t);
      v.role = VarRole::kLocation;
      v.slot = t;
      v.location = l;
      model.AddVariable(std::move(v));
    }
  }
  model.m_base_ = model.num_variables();
  for (int t = 0; t < T; ++t) {
    model.AddVariable(Variable{fmt::format("m_{}", t), VarRole::kAsleep, t});
  }
  model.e_base_ = model.num_variables();
  for (int t = 0; t < T; ++t) {
    model.AddVariable(Variable{fmt::format("e_{}", t), VarRole::kEvent, t});
  }
  auto location_of = [&](const std::string& code) {
    return static_cast<int>(std::find(model.locations.begin(), model.locations.end(), code) -
                            model.locations.begin());
  };

  // Selection variables.
  struct FlightVar {
    int var;
    int penalty_var;
    FlightSlots slots;
    int src;
    int dst;
  };
  std::vector<FlightVar> flight_vars;
  model.leg_flight_vars.assign(request.legs.size(), {});
  for (std::size_t k = 0; k < request.legs.size(); ++k) {
    const TripLeg& leg = request.legs[k];
    for (const FlightOption& f : inventory.flights) {
      if (f.origin != leg.origin || f.destination != leg.destination ||
          f.departure.date() != leg.date) {
        continue;
      }
      const FlightSlots slots = FlightSlotsOf(f, grid);
      if (!FitsGrid(slots, grid)) {
        throw Error(ErrorCode::kGridMismatch,
                    fmt::format("flight {} ({} -> {}) does not fit the {}-slot grid",
                                f.id, f.departure.ToString(), f.arrival.ToString(), T));
      }
      const int option = static_cast<int>(model.flights.size());
      model.flights.push_back(f);
      const Cents penalty = SoftPenalty(f, static_cast<int>(k), request, params);
      model.flight_penalties.push_back(penalty);
      const std::string id = Sanitize(f.id);
      const int fv = model.AddVariable(
          Variable{"f_" + id + (request.legs.size() > 1 ? fmt::format("_l{}", k) : ""),
                   VarRole::kFlight, -1, -1, option, static_cast<int>(k)},
          FlightObjectiveCoef(f, params));
      int pv = -1;
      if (penalty.value() > 0) {
        pv = model.AddVariable(Variable{"p_" + id + fmt::format("_l{}", k),
                                        VarRole::kPenalty, -1, -1, option,
                                        static_cast<int>(k)},
                               penalty.AsDouble());
      }
      model.leg_flight_vars[k].push_back(fv);
      flight_vars.push_back(FlightVar{fv, pv, slots, location_of(f.origin),
                                      location_of(f.destination)});
    }
  }

  model.stays = StaysOf(request);
  model.stay_hotel_vars.assign(model.stays.size(), {});
  struct HotelVar {
    int var;
    int city;
    std::vector<int> coverage;
  };
  std::vector<HotelVar> hotel_vars;
  for (const Stay& stay : model.stays) {
    if (stay.nights() <= 0) continue;
    for (const HotelOption& h : inventory.hotels) {
      if (h.city != stay.city || !h.CoversNights(stay.first_night, stay.end)) continue;
      const int option = static_cast<int>(model.hotels.size());
      model.hotels.push_back(h);
      const int hv = model.AddVariable(
          Variable{fmt::format("h_{}_s{}", Sanitize(h.id), stay.index), VarRole::kHotel,
                   -1, -1, option, stay.index},
          HotelObjectiveCoef(h, stay.nights(), params));
      model.stay_hotel_vars[stay.index].push_back(hv);
      hotel_vars.push_back(HotelVar{hv, location_of(h.city), HotelCoverage(h, stay, grid)});
    }
  }

  auto add = [&](LinearConstraint c, const char* family) {
    c.family = family;
    model.AddConstraint(std::move(c));
  };

  // (a) One location per slot; minimum sleep per night.
  for (int t = 0; t < T; ++t) {
    Linear row;
    for (int l = 0; l < num_locations; ++l) row.Add(model.u(l, t), 1);
    add(std::move(row).Emit(fmt::format("loc_t{}", t), Sense::kEqual, 1), "commonsense");
  }
  for (std::size_t n = 0; n < grid.nights().size(); ++n) {
    Linear row;
    const SlotRange night = grid.nights()[n];
    for (int t = std::max(0, night.begin); t < std::min(T, night.end); ++t) {
      row.Add(model.m(t), 1);
    }
    add(std::move(row).Emit(fmt::format("sleep_n{}", n + 1), Sense::kGreaterEqual,
                            params.min_sleep_slots),
        "commonsense");
  }

  // (b) No teleporting: e(t) = 0 => u_l(t+1) = u_l(t).
  for (int t = 0; t + 1 < T; ++t) {
    const Literal no_event{model.e(t), true};
    for (int l = 0; l < num_locations; ++l) {
      for (LinearConstraint& c :
           EncodeImplication(std::span(&no_event, 1), Operand::Var(model.u(l, t + 1)),
                             Operand::Var(model.u(l, t)), M,
                             fmt::format("cont_{}_t{}", model.locations[l], t))) {
        add(std::move(c), "continuity");
      }
    }
  }
  // Events only happen at departure or landing slots of chosen flights.
  std::vector<std::vector<int>> event_flights(T);
  for (const FlightVar& fv : flight_vars) {
    event_flights[fv.slots.depart].push_back(fv.var);
    if (fv.slots.land - 1 != fv.slots.depart) {
      event_flights[fv.slots.land - 1].push_back(fv.var);
    }
  }
  for (int t = 0; t < T; ++t) {
    Linear row;
    row.Add(model.e(t), 1);
    for (int fv : event_flights[t]) row.Add(fv, -1);
    add(std::move(row).Emit(fmt::format("event_t{}", t), Sense::kLessEqual, 0), "event");
  }

  // (c) Flight footprints and one flight per leg.
  for (const FlightVar& fv : flight_vars) {
    const Literal chosen{fv.var, false};
    const std::string& name = model.variables()[fv.var].name;
    const std::pair<int, const char*> pins[] = {
        {model.u(fv.src, fv.slots.depart), "src"},
        {model.u(air, fv.slots.depart + 1), "air_out"},
        {model.u(fv.dst, fv.slots.land), "dst"},
        {model.u(air, fv.slots.land - 1), "air_in"},
        {model.e(fv.slots.depart), "ev_dep"},
        {model.e(fv.slots.land - 1), "ev_land"},
    };
    for (const auto& [var, tag] : pins) {
      for (LinearConstraint& c :
           EncodeImplication(std::span(&chosen, 1), Operand::Var(var),
                             Operand::Constant(1), M, fmt::format("{}_{}", name, tag))) {
        add(std::move(c), "flight");
      }
    }
  }
  for (std::size_t k = 0; k < model.leg_flight_vars.size(); ++k) {
    Linear row;
    for (int fv : model.leg_flight_vars[k]) row.Add(fv, 1);
    add(std::move(row).Emit(fmt::format("leg_{}", k + 1), Sense::kEqual, 1), "selection");
  }

  // (d) Hotels: sleep only where a chosen hotel covers the slot and the
  // traveller is in its city; never in the air; one hotel per stay.
  std::vector<std::vector<int>> covering(T);
  for (const HotelVar& hv : hotel_vars) {
    const Literal chosen{hv.var, false};
    const std::string& name = model.variables()[hv.var].name;
    for (int t : hv.coverage) {
      covering[t].push_back(hv.var);
      add(EncodeConditionalLessEqual(std::span(&chosen, 1), Operand::Var(model.m(t)),
                                     Operand::Var(model.u(hv.city, t)), M,
                                     fmt::format("{}_sleep_t{}", name, t)),
          "hotel");
    }
  }
  for (int t = 0; t < T; ++t) {
    Linear allow;
    allow.Add(model.m(t), 1);
    for (int hv : covering[t]) allow.Add(hv, -1);
    add(std::move(allow).Emit(fmt::format("allow_t{}", t), Sense::kLessEqual, 0), "hotel");
    Linear no_air;
    no_air.Add(model.m(t), 1);
    no_air.Add(model.u(air, t), 1);
    add(std::move(no_air).Emit(fmt::format("noair_t{}", t), Sense::kLessEqual, 1), "hotel");
  }
  for (const Stay& stay : model.stays) {
    if (stay.nights() <= 0) continue;
    Linear row;
    for (int hv : model.stay_hotel_vars[stay.index]) row.Add(hv, 1);
    add(std::move(row).Emit(fmt::format("stay_{}", stay.index + 1), Sense::kEqual, 1),
        "selection");
  }

  // (e) Budgets.
  const auto& vars = model.variables();
  auto flight_price = [&](int v) { return model.flights[vars[v].option].price.AsDouble(); };
  auto night_price = [&](int v) {
    return model.hotels[vars[v].option].price_per_night.AsDouble();
  };
  auto stay_nights = [&](int v) { return model.stays[vars[v].group].nights(); };
  if (const auto& cap = request.airline.price_total_max) {
    Linear row;
    for (const FlightVar& fv : flight_vars) row.Add(fv.var, flight_price(fv.var));
    add(std::move(row).Emit("budget_flights", Sense::kLessEqual, cap->AsDouble()), "budget");
  }
  for (const Stay& stay : model.stays) {
    if (stay.nights() <= 0) continue;
    const std::pair<const std::optional<Cents>*, const char*> nightly[] = {
        {&request.hotel.daily_budget_max, "budget_hotel_night"},
        {&request.budget.everyday_budget, "budget_everyday"},
    };
    for (const auto& [cap, tag] : nightly) {
      if (!cap->has_value()) continue;
      Linear row;
      for (int hv : model.stay_hotel_vars[stay.index]) row.Add(hv, night_price(hv));
      add(std::move(row).Emit(fmt::format("{}_s{}", tag, stay.index + 1), Sense::kLessEqual,
                              (*cap)->AsDouble()),
          "budget");
    }
  }
  if (const auto& cap = request.hotel.total_budget_max) {
    Linear row;
    for (const HotelVar& hv : hotel_vars) row.Add(hv.var, night_price(hv.var) * stay_nights(hv.var));
    add(std::move(row).Emit("budget_hotel_total", Sense::kLessEqual, cap->AsDouble()), "budget");
  }
  if (const auto& cap = request.budget.total_budget) {
    Linear row;
    for (const FlightVar& fv : flight_vars) row.Add(fv.var, flight_price(fv.var));
    for (const HotelVar& hv : hotel_vars) row.Add(hv.var, night_price(hv.var) * stay_nights(hv.var));
    add(std::move(row).Emit("budget_total", Sense::kLessEqual, cap->AsDouble()), "budget");
  }

  // (f) Soft windows: a chosen flight switches on its penalty indicator.
  for (const FlightVar& fv : flight_vars) {
    if (fv.penalty_var < 0) continue;
    const Literal chosen{fv.var, false};
    add(EncodeConditionalLessEqual(std::span(&chosen, 1), Operand::Constant(1),
                                   Operand::Var(fv.penalty_var), M,
                                   vars[fv.penalty_var].name + "_on"),
        "soft");
  }
  return model;
}

Itinerary MilpModel::Decode(std::span<const std::uint8_t> x) const {
  Itinerary it;
  for (std::size_t k = 0; k < leg_flight_vars.size(); ++k) {
    for (int v : leg_flight_vars[k]) {
      if (!x[v]) continue;
      const FlightOption& f = flights[variables_[v].option];
      it.flights.push_back(ChosenFlight{static_cast<int>(k), f.id});
      it.cost.flight_total += f.price;
      it.cost.soft_penalty += flight_penalties[variables_[v].option];
    }
  }
  for (const Stay& stay : stays) {
    for (int v : stay_hotel_vars[stay.index]) {
      if (!x[v]) continue;
      const HotelOption& h = hotels[variables_[v].option];
      it.hotels.push_back(ChosenHotel{stay.index, h.id, stay.first_night, stay.end});
      it.cost.hotel_total += h.price_per_night * stay.nights();
    }
  }
  it.cost.grand_total = it.cost.flight_total + it.cost.hotel_total;

  Schedule s;
  s.slot_minutes = grid.slot_minutes();
  s.origin = grid.origin();
  s.locations = locations;
  const int T = grid.num_slots();
  s.u.assign(locations.size(), std::vector<std::uint8_t>(T, 0));
  s.asleep.assign(T, 0);
  s.event.assign(T, 0);
  for (std::size_t l = 0; l < locations.size(); ++l) {
    for (int t = 0; t < T; ++t) s.u[l][t] = x[u(static_cast<int>(l), t)];
  }
  for (int t = 0; t < T; ++t) {
    s.asleep[t] = x[m(t)];
    s.event[t] = x[e(t)];
  }
  it.timeline = std::move(s);
  return it;
}

std::string DumpLp(const MilpModel& model) {
  const auto& vars = model.variables();
  auto format_terms = [&](const std::vector<std::pair<int, double>>& terms) {
    if (terms.empty()) return std::string("0");
    std::string out;
    for (std::size_t i = 0; i < terms.size(); ++i) {
      const auto& [v, c] = terms[i];
      if (i == 0) {
        out += fmt::format("{} {}", c, vars[v].name);
      } else if (c < 0) {
        out += fmt::format(" - {} {}", -c, vars[v].name);
      } else {
        out += fmt::format(" + {} {}", c, vars[v].name);
      }
    }
    return out;
  };
  std::string out = "\\ wayplan itinerary model\nMinimize\n obj: ";
  std::vector<std::pair<int, double>> obj;
  for (std::size_t v = 0; v < vars.size(); ++v) {
    if (model.objective()[v] != 0) obj.emplace_back(static_cast<int>(v), model.objective()[v]);
  }
  out += format_terms(obj) + "\nSubject To\n";
  for (const LinearConstraint& c : model.constraints()) {
    std::vector<std::pair<int, double>> terms;
    for (const Term& t : c.terms) terms.emplace_back(t.var, t.coef);
    const char* sense = c.sense == Sense::kLessEqual      ? "<="
                        : c.sense == Sense::kGreaterEqual ? ">="
                                                          : "=";
    out += fmt::format(" {}: {} {} {}\n", c.name, format_terms(terms), sense, c.rhs);
  }
  out += "Binary\n";
  for (const Variable& v : vars) out += " " + v.name + "\n";
  out += "End\n";
  return out;
}

}  // namespace wayplan
