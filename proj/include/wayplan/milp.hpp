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

#ifndef WAYPLAN_MILP_HPP_
#define WAYPLAN_MILP_HPP_

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wayplan/calendar.hpp"
#include "wayplan/inventory.hpp"
#include "wayplan/money.hpp"
#include "wayplan/request.hpp"

namespace wayplan {

struct GridOptions {
  int slot_minutes = 60;  // must divide a day
  int max_span_days = 10;
  // Nightly sleep window, crossing midnight.
  int night_start = 22 * 60;
  int night_end = 8 * 60;
};

struct SlotRange {
  int begin = 0;
  int end = 0;  // exclusive
  int size() const { return end - begin; }
  bool Contains(int t) const { return t >= begin && t < end; }
  bool operator==(const SlotRange&) const = default;
};

// Uniform discretization from midnight of the first leg date to midnight after
// the last one.
class TimeGrid {
 public:
  TimeGrid() = default;
  TimeGrid(Date first_day, int days, const GridOptions& options);

  int slot_minutes() const { return slot_minutes_; }
  int slots_per_day() const { return kMinutesPerDay / slot_minutes_; }
  int days() const { return days_; }
  int num_slots() const { return days_ * slots_per_day(); }
  Date first_day() const { return first_day_; }
  DateTime origin() const { return DateTime::At(first_day_, 0); }
  // One window per calendar night strictly inside the grid.
  const std::vector<SlotRange>& nights() const { return nights_; }

  // Grid index of the slot containing `time`; may fall outside [0, T).
  int FloorSlot(DateTime time) const;
  // Smallest slot index whose start is at or after `time`.
  int CeilSlot(DateTime time) const;
  DateTime SlotStart(int slot) const;

 private:
  Date first_day_;
  int days_ = 0;
  int slot_minutes_ = 60;
  std::vector<SlotRange> nights_;
};

// Throws kSpanTooLong when the trip exceeds options.max_span_days and
// kInvalidArgument when slot_minutes does not divide a day.
TimeGrid BuildTimeGrid(const SymbolicRequest& request,
                       const GridOptions& options = {});

enum class ObjectiveMode { kMinCost, kBetterHotel, kBetterFlight };
std::string_view ObjectiveModeName(ObjectiveMode mode);
std::optional<ObjectiveMode> ParseObjectiveMode(std::string_view name);

struct ModeWeights {
  double flight = 1.0;
  double hotel = 1.0;
};

struct ModelParams {
  GridOptions grid;
  int min_sleep_slots = 6;  // per night
  double big_m = 1.0;       // binary implications need no more
  Cents soft_penalty_per_slot = Cents::Dollars(10);
  ObjectiveMode mode = ObjectiveMode::kMinCost;
  ModeWeights better_hotel{1.0, 0.5};
  ModeWeights better_flight{0.5, 1.0};
  // Better-hotel mode: credit per star per night.
  Cents hotel_rating_bonus = Cents::Dollars(15);
  // Better-flight mode: credit per quality point (cabin rank + non-stop).
  Cents flight_quality_bonus = Cents::Dollars(20);
  // Red-eye departures: [start, end) wrapping past midnight.
  int red_eye_start = 23 * 60;
  int red_eye_end = 5 * 60;
};

// Throws kInvalidArgument describing the first bad field.
void ValidateModelParams(const ModelParams& params);

// Departure floors and arrival ceils to the grid; landing is pushed out so
// the traveller spends at least one slot in the air.
struct FlightSlots {
  int depart = 0;
  int land = 0;
};
FlightSlots FlightSlotsOf(const FlightOption& flight, const TimeGrid& grid);
bool FitsGrid(const FlightSlots& slots, const TimeGrid& grid);

// Slots where a hotel permits sleep during a stay: for every booked night,
// [check-in on that date, check-out the next morning), rounded inward.
std::vector<int> HotelCoverage(const HotelOption& hotel, const Stay& stay,
                               const TimeGrid& grid);

bool IsRedEye(const FlightOption& flight, const ModelParams& params);

// Soft-window deviation of a flight flying `leg`, priced per started slot.
Cents SoftPenalty(const FlightOption& flight, int leg,
                  const SymbolicRequest& request, const ModelParams& params);

// Drops flights and hotels that violate hard categorical constraints.
// Budgets, prices and timing stay in the model.
Inventory PrefilterOptions(const SymbolicRequest& request,
                           const Inventory& inventory,
                           const ModelParams& params = {});

enum class VarRole { kLocation, kAsleep, kEvent, kFlight, kHotel, kPenalty };
std::string_view VarRoleName(VarRole role);

struct Variable {
  std::string name;
  VarRole role = VarRole::kLocation;
  int slot = -1;      // u, m, e
  int location = -1;  // u
  int option = -1;    // f, h, p: index into the model's option snapshot
  int group = -1;     // f: leg, h: stay
};

enum class Sense { kLessEqual, kGreaterEqual, kEqual };

struct Term {
  int var = 0;
  double coef = 0;
  bool operator==(const Term&) const = default;
};

struct LinearConstraint {
  std::string name;
  std::string family;
  std::vector<Term> terms;
  Sense sense = Sense::kLessEqual;
  double rhs = 0;

  double Activity(std::span<const std::uint8_t> x) const;
  bool IsSatisfied(std::span<const std::uint8_t> x, double tol = 1e-9) const;
};

// Condition literal: `var` itself, or its complement when negated.
struct Literal {
  int var = 0;
  bool negated = false;
};

// Binary variable or constant side of an implication.
struct Operand {
  std::optional<int> var;
  double constant = 0;
  static Operand Var(int v) { return Operand{v, 0}; }
  static Operand Constant(double c) { return Operand{std::nullopt, c}; }
};

// Big-M encoding of "all literals true => x == y":
//   x <= y + M * sum_j (1 - z_j)
//   y <= x + M * sum_j (1 - z_j)
// Throws kMTooSmall when M is below the largest attainable |x - y|.
std::array<LinearConstraint, 2> EncodeImplication(std::span<const Literal> z,
                                                  Operand x, Operand y,
                                                  double big_m,
                                                  std::string_view name = "");

// First half of the pair above: "all literals true => x <= y".
LinearConstraint EncodeConditionalLessEqual(std::span<const Literal> z,
                                            Operand x, Operand y, double big_m,
                                            std::string_view name = "");

class MilpModel {
 public:
  int AddVariable(Variable var, double objective = 0);
  void AddConstraint(LinearConstraint constraint);

  const std::vector<Variable>& variables() const { return variables_; }
  const std::vector<LinearConstraint>& constraints() const { return constraints_; }
  const std::vector<double>& objective() const { return objective_; }
  int num_variables() const { return static_cast<int>(variables_.size()); }
  std::optional<int> FindVariable(std::string_view name) const;

  double ObjectiveValue(std::span<const std::uint8_t> x) const;
  // Names of constraints violated by `x`.
  std::vector<std::string> Violations(std::span<const std::uint8_t> x) const;
  std::map<std::string, int> CountByFamily() const;

  // Layout filled in by BuildModel.
  TimeGrid grid;
  std::vector<std::string> locations;  // cities, then the AIR pseudo-location
  std::vector<FlightOption> flights;   // option snapshot for f and p vars
  std::vector<Cents> flight_penalties; // soft-window penalty per snapshot
  std::vector<HotelOption> hotels;     // option snapshot for h vars
  std::vector<Stay> stays;
  std::vector<std::vector<int>> leg_flight_vars;
  std::vector<std::vector<int>> stay_hotel_vars;  // empty for zero-night gaps

  int air_location() const { return static_cast<int>(locations.size()) - 1; }
  int u(int location, int slot) const {
    return u_base_ + location * grid.num_slots() + slot;
  }
  int m(int slot) const { return m_base_ + slot; }
  int e(int slot) const { return e_base_ + slot; }

  // Converts a full assignment into flights, hotels, timeline and costs.
  Itinerary Decode(std::span<const std::uint8_t> x) const;

 private:
  friend MilpModel BuildModel(const SymbolicRequest&, const Inventory&,
                              const ModelParams&);
  std::vector<Variable> variables_;
  std::vector<LinearConstraint> constraints_;
  std::vector<double> objective_;
  std::map<std::string, int, std::less<>> index_;
  int u_base_ = 0;
  int m_base_ = 0;
  int e_base_ = 0;
};

// Compiles a request over a prefiltered inventory. Flights and hotels that do
// not serve any leg or stay get no variable. Throws kGridMismatch when a
// serving flight does not fit the grid.
MilpModel BuildModel(const SymbolicRequest& request, const Inventory& inventory,
                     const ModelParams& params = {});

// Objective coefficients of one option under the configured mode.
double FlightObjectiveCoef(const FlightOption& flight, const ModelParams& params);
double HotelObjectiveCoef(const HotelOption& hotel, int nights,
                          const ModelParams& params);

// LP-style text: objective, one `name: coeff var + ... sense rhs` per line,
// then the binary section.
std::string DumpLp(const MilpModel& model);

}  // namespace wayplan

#endif  // WAYPLAN_MILP_HPP_
