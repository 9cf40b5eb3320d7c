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

#ifndef WAYPLAN_SOLVER_HPP_
#define WAYPLAN_SOLVER_HPP_

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "wayplan/inventory.hpp"
#include "wayplan/milp.hpp"
#include "wayplan/request.hpp"
#include "wayplan/simulate.hpp"

namespace wayplan {

enum class SolveStatus { kOptimal, kInfeasible, kTimeLimit };
std::string_view SolveStatusName(SolveStatus status);

enum class BranchOrder { kObjectiveDescending, kIndexAscending };

// Per-node hook: the node's lower bound and the current partial assignment
// (-1 free, 0, 1).
using BoundObserver = std::function<void(double bound, std::span<const std::int8_t>)>;

struct SolverConfig {
  std::int64_t time_limit_ms = 10000;
  std::int64_t node_limit = 100'000'000;
  BranchOrder branch_order = BranchOrder::kObjectiveDescending;
  double tolerance = 1e-6;
  BoundObserver observer;
};

void ValidateSolverConfig(const SolverConfig& config);

struct SolveStats {
  std::int64_t nodes = 0;
  std::int64_t propagations = 0;
  double load_ms = 0;    // model construction and solver setup
  double search_ms = 0;  // tree search
  double wall_ms = 0;
};

struct SolveResult {
  SolveStatus status = SolveStatus::kInfeasible;
  std::vector<std::uint8_t> solution;  // empty when none was found
  std::optional<double> objective;
  SolveStats stats;
};

// Exact 0-1 branch and bound. Branches over exactly-one selection rows, then
// any remaining free variables; ties go to the lexicographically smallest
// sorted list of chosen selection variables.
SolveResult Solve(const MilpModel& model, const SolverConfig& config = {});

struct InstanceResult {
  SolveResult result;
  std::optional<Itinerary> itinerary;
};

// Prefilter, build, solve and decode.
InstanceResult SolveInstance(const SymbolicRequest& request,
                             const Inventory& inventory,
                             const ModelParams& params = {},
                             const SolverConfig& config = {});

// Enumerates every flight-per-leg and hotel-per-stay combination through the
// simulator. Throws CapExceeded above `cap` combinations.
InstanceResult BruteForce(const SymbolicRequest& request,
                          const Inventory& inventory,
                          const ModelParams& params = {},
                          std::int64_t cap = 1'000'000);

Verdict CheckFeasible(const Itinerary& itinerary, const SymbolicRequest& request,
                      const Inventory& inventory, const ModelParams& params = {});

}  // namespace wayplan

#endif  // WAYPLAN_SOLVER_HPP_
