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

#ifndef WAYPLAN_SIMULATE_HPP_
#define WAYPLAN_SIMULATE_HPP_

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wayplan/inventory.hpp"
#include "wayplan/milp.hpp"
#include "wayplan/request.hpp"

namespace wayplan {

// A violated constraint. `code` is a dotted family path such as
// "hotel.min_rating" or "commonsense.sleep(night 2)".
struct Violation {
  std::string code;
  std::string message;
};

struct Verdict {
  std::vector<Violation> violations;
  CostBreakdown cost;
  // Mode objective of the selection in cents (prices, bonuses, penalties).
  double objective = 0;

  bool feasible() const { return violations.empty(); }
  bool Has(std::string_view code) const;
  std::vector<std::string> Codes() const;
};

// Replays an itinerary against the request by walking the trip slot by slot.
// Deliberately shares no arithmetic with the model builder.
class Simulator {
 public:
  Simulator(const SymbolicRequest& request, const Inventory& inventory,
            const ModelParams& params = {});

  Verdict Check(const Itinerary& itinerary) const;

  // Fast path used by enumeration: one flight per leg, one hotel per stay
  // (nullptr for stays without nights). Returns false at the first violation
  // and fills `objective` for feasible selections.
  bool Feasible(std::span<const FlightOption* const> flights,
                std::span<const HotelOption* const> hotels,
                double* objective) const;

  double Objective(std::span<const FlightOption* const> flights,
                   std::span<const HotelOption* const> hotels) const;

  const SymbolicRequest& request() const { return request_; }
  const std::vector<Stay>& stays() const { return stays_; }
  int num_slots() const { return num_slots_; }

 private:
  struct Leg {
    int depart_slot = 0;
    int land_slot = 0;
  };

  int SlotOf(DateTime time, bool round_up) const;
  Leg SlotsOf(const FlightOption& flight) const;
  bool RedEye(const FlightOption& flight) const;
  std::int64_t PenaltyCents(const FlightOption& flight, int leg) const;
  // Empty string when ok, otherwise the failing constraint path.
  std::string_view FlightCategoricalFailure(const FlightOption& flight) const;
  std::string_view HotelCategoricalFailure(const HotelOption& hotel) const;
  bool HotelCovers(const HotelOption& hotel, const Stay& stay, int slot) const;

  // Full check; `out` collects violations, or null for first-failure mode.
  bool Run(std::span<const FlightOption* const> flights,
           std::span<const HotelOption* const> hotels, Verdict* out) const;
  void CheckTimeline(const Schedule& schedule,
                     std::span<const FlightOption* const> flights,
                     std::span<const HotelOption* const> hotels, Verdict* out) const;
  bool Sleepable(int slot, std::span<const FlightOption* const> flights,
                 std::span<const HotelOption* const> hotels) const;
  std::string_view LocationAt(int slot, std::span<const FlightOption* const> flights) const;

  SymbolicRequest request_;
  const Inventory* inventory_;
  ModelParams params_;
  std::vector<Stay> stays_;
  DateTime origin_;
  int slot_minutes_ = 60;
  int num_slots_ = 0;
  std::vector<std::pair<int, int>> nights_;  // [begin, end) slots
};

// Recomputes cost and feasibility of `itinerary` without the solver.
Verdict EvaluateCost(const Itinerary& itinerary, const SymbolicRequest& request,
                     const Inventory& inventory, const ModelParams& params = {});

}  // namespace wayplan

#endif  // WAYPLAN_SIMULATE_HPP_
