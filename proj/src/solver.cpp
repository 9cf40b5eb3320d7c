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

#include "wayplan/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "wayplan/error.hpp"

namespace wayplan {
namespace {

using Clock = std::chrono::steady_clock;

double MillisSince(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

bool IsSelection(const Variable& v) {
  return v.role == VarRole::kFlight || v.role == VarRole::kHotel;
}

class Search {
 public:
  Search(const MilpModel& model, const SolverConfig& config)
      : model_(model), config_(config), tol_(config.tolerance) {
    const int n = model.num_variables();
    const auto& rows = model.constraints();
    cost_ = model.objective();
    value_.assign(n, -1);
    lo_.resize(rows.size());
    hi_.resize(rows.size());
    min_act_.assign(rows.size(), 0);
    max_act_.assign(rows.size(), 0);
    max_coef_.assign(rows.size(), 0);
    queued_.assign(rows.size(), 0);

    std::vector<int> col_count(n, 0);
    row_start_.push_back(0);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      const LinearConstraint& c = rows[r];
      const double inf = std::numeric_limits<double>::infinity();
      lo_[r] = c.sense == Sense::kLessEqual ? -inf : c.rhs;
      hi_[r] = c.sense == Sense::kGreaterEqual ? inf : c.rhs;
      for (const Term& t : c.terms) {
        row_terms_.push_back(t);
        ++col_count[t.var];
        (t.coef > 0 ? max_act_[r] : min_act_[r]) += t.coef;
        max_coef_[r] = std::max(max_coef_[r], std::abs(t.coef));
      }
      row_start_.push_back(static_cast<int>(row_terms_.size()));
    }
    col_start_.assign(n + 1, 0);
    for (int v = 0; v < n; ++v) col_start_[v + 1] = col_start_[v] + col_count[v];
    col_entries_.resize(col_start_[n]);
    std::vector<int> fill(col_start_.begin(), col_start_.end() - 1);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      for (int i = row_start_[r]; i < row_start_[r + 1]; ++i) {
        const Term& t = row_terms_[i];
        col_entries_[fill[t.var]++] = ColEntry{static_cast<int>(r), t.coef};
      }
    }
    FindGroups();
    FindImpliedCosts();
  }

  SolveResult Run() {
    SolveResult result;
    start_ = Clock::now();
    for (std::size_t r = 0; r < queued_.size(); ++r) Enqueue(static_cast<int>(r));
    if (Propagate()) Dfs();
    result.stats.nodes = nodes_;
    result.stats.propagations = propagations_;
    if (!best_.empty()) {
      result.solution = best_;
      result.objective = model_.ObjectiveValue(best_);
    }
    if (stopped_) {
      result.status = SolveStatus::kTimeLimit;
    } else {
      result.status = best_.empty() ? SolveStatus::kInfeasible : SolveStatus::kOptimal;
    }
    return result;
  }

 private:
  struct ColEntry {
    int row;
    double coef;
  };
  struct Group {
    std::vector<int> members;  // sorted by implied cost, then index
    double order_key = 0;
    int first_index = 0;
  };

  // Exactly-one rows over selection variables.
  void FindGroups() {
    const auto& rows = model_.constraints();
    const auto& vars = model_.variables();
    for (const LinearConstraint& c : rows) {
      if (c.sense != Sense::kEqual || c.rhs != 1.0 || c.terms.empty()) continue;
      const bool all_selection = std::all_of(c.terms.begin(), c.terms.end(), [&](const Term& t) {
        return t.coef == 1.0 && IsSelection(vars[t.var]);
      });
      if (!all_selection) continue;
      Group g;
      for (const Term& t : c.terms) g.members.push_back(t.var);
      groups_.push_back(std::move(g));
    }
  }

  // A positive-cost variable p is charged to f when f = 1 forces p = 1 via a
  // two-term row and no other variable forces it.
  void FindImpliedCosts() {
    const int n = model_.num_variables();
    std::vector<int> owner(n, -1);
    std::vector<int> owners(n, 0);
    const auto& rows = model_.constraints();
    for (std::size_t r = 0; r < rows.size(); ++r) {
      const LinearConstraint& c = rows[r];
      if (c.terms.size() != 2 || c.sense != Sense::kLessEqual) continue;
      for (int i = 0; i < 2; ++i) {
        const Term& f = c.terms[i];
        const Term& p = c.terms[1 - i];
        if (cost_[p.var] <= 0) continue;
        // f = 1, p = 0 infeasible while f = 1, p = 1 feasible.
        if (f.coef > c.rhs + tol_ && f.coef + p.coef <= c.rhs + tol_) {
          if (owner[p.var] != f.var) ++owners[p.var];
          owner[p.var] = f.var;
        }
      }
    }
    implied_.assign(n, {});
    for (int p = 0; p < n; ++p) {
      if (owners[p] == 1) implied_[owner[p]].push_back(p);
    }
    for (Group& g : groups_) {
      auto key = [&](int v) {
        double c = cost_[v];
        for (int p : implied_[v]) c += cost_[p];
        return c;
      };
      std::stable_sort(g.members.begin(), g.members.end(), [&](int a, int b) {
        const double ka = key(a), kb = key(b);
        return ka != kb ? ka < kb : a < b;
      });
      g.order_key = -std::numeric_limits<double>::infinity();
      for (int v : g.members) g.order_key = std::max(g.order_key, key(v));
      g.first_index = *std::min_element(g.members.begin(), g.members.end());
    }
    std::stable_sort(groups_.begin(), groups_.end(), [&](const Group& a, const Group& b) {
      if (config_.branch_order == BranchOrder::kObjectiveDescending &&
          a.order_key != b.order_key) {
        return a.order_key > b.order_key;
      }
      return a.first_index < b.first_index;
    });
    in_group_.assign(n, 0);
    for (const Group& g : groups_) {
      for (int v : g.members) {
        in_group_[v] = 1;
        for (int p : implied_[v]) in_group_[p] = 2;
      }
    }
  }

  void Enqueue(int row) {
    if (!queued_[row]) {
      queued_[row] = 1;
      queue_.push_back(row);
    }
  }

  void Assign(int v, int val) {
    value_[v] = static_cast<std::int8_t>(val);
    trail_.push_back(v);
    for (int i = col_start_[v]; i < col_start_[v + 1]; ++i) {
      const ColEntry& e = col_entries_[i];
      if (val == 1) {
        (e.coef > 0 ? min_act_[e.row] : max_act_[e.row]) += e.coef;
      } else {
        (e.coef > 0 ? max_act_[e.row] : min_act_[e.row]) -= e.coef;
      }
      Enqueue(e.row);
    }
  }

  void Undo(std::size_t mark) {
    while (trail_.size() > mark) {
      const int v = trail_.back();
      trail_.pop_back();
      const int val = value_[v];
      for (int i = col_start_[v]; i < col_start_[v + 1]; ++i) {
        const ColEntry& e = col_entries_[i];
        if (val == 1) {
          (e.coef > 0 ? min_act_[e.row] : max_act_[e.row]) -= e.coef;
        } else {
          (e.coef > 0 ? max_act_[e.row] : min_act_[e.row]) += e.coef;
        }
      }
      value_[v] = -1;
    }
  }

  bool Propagate() {
    bool ok = true;
    std::size_t head = 0;
    while (ok && head < queue_.size()) {
      const int r = queue_[head++];
      queued_[r] = 0;
      if (min_act_[r] > hi_[r] + tol_ || max_act_[r] < lo_[r] - tol_) {
        ok = false;
        break;
      }
      if (min_act_[r] + max_coef_[r] <= hi_[r] + tol_ &&
          max_act_[r] - max_coef_[r] >= lo_[r] - tol_) {
        continue;
      }
      for (int i = row_start_[r]; i < row_start_[r + 1]; ++i) {
        const Term& t = row_terms_[i];
        if (value_[t.var] >= 0) continue;
        const double a = t.coef;
        int forced = -1;
        if (a > 0) {
          if (min_act_[r] + a > hi_[r] + tol_) {
            forced = 0;
          } else if (max_act_[r] - a < lo_[r] - tol_) {
            forced = 1;
          }
        } else {
          if (max_act_[r] + a < lo_[r] - tol_) {
            forced = 0;
          } else if (min_act_[r] - a > hi_[r] + tol_) {
            forced = 1;
          }
        }
        if (forced >= 0) {
          ++propagations_;
          Assign(t.var, forced);
          if (min_act_[r] > hi_[r] + tol_ || max_act_[r] < lo_[r] - tol_) {
            ok = false;
            break;
          }
        }
      }
    }
    for (std::size_t i = head; i < queue_.size(); ++i) queued_[queue_[i]] = 0;
    queue_.clear();
    return ok;
  }

  double LowerBound() const {
    double bound = 0;
    for (std::size_t v = 0; v < value_.size(); ++v) {
      if (value_[v] == 1) {
        bound += cost_[v];
      } else if (value_[v] < 0 && !in_group_[v]) {
        bound += std::min(0.0, cost_[v]);
      }
    }
    for (const Group& g : groups_) {
      bool decided = false;
      double cheapest = std::numeric_limits<double>::infinity();
      for (int v : g.members) {
        if (value_[v] == 1) {
          decided = true;
          break;
        }
        if (value_[v] < 0) {
          double c = cost_[v];
          for (int p : implied_[v]) {
            if (value_[p] < 0) c += cost_[p];
          }
          cheapest = std::min(cheapest, c);
        }
      }
      if (decided) continue;
      bound += cheapest;
    }
    // Owned variables of decided-away or chosen members.
    for (const Group& g : groups_) {
      for (int f : g.members) {
        if (value_[f] < 0) continue;
        for (int p : implied_[f]) {
          if (value_[p] < 0) bound += std::min(0.0, cost_[p]);
        }
      }
    }
    return bound;
  }

  bool OutOfBudget() {
    if (nodes_ >= config_.node_limit) return true;
    if ((nodes_ & 255) == 0 && MillisSince(start_) > config_.time_limit_ms) return true;
    return false;
  }

  void Record() {
    double obj = 0;
    std::vector<int> key;
    for (std::size_t v = 0; v < value_.size(); ++v) {
      if (value_[v] == 1) {
        obj += cost_[v];
        if (IsSelection(model_.variables()[v])) key.push_back(static_cast<int>(v));
      }
    }
    const bool better = best_.empty() || obj < best_obj_ - tol_ ||
                        (obj <= best_obj_ + tol_ && key < best_key_);
    if (!better) return;
    best_obj_ = obj;
    best_key_ = std::move(key);
    best_.assign(value_.begin(), value_.end());
  }

  void Dfs() {
    if (stopped_) return;
    ++nodes_;
    if (OutOfBudget()) {
      stopped_ = true;
      return;
    }
    const double bound = LowerBound();
    if (config_.observer) config_.observer(bound, value_);
    if (!best_.empty() && bound > best_obj_ + tol_) return;

    for (const Group& g : groups_) {
      const bool decided = std::any_of(g.members.begin(), g.members.end(),
                                       [&](int v) { return value_[v] == 1; });
      if (decided) continue;
      const std::size_t outer = trail_.size();
      for (int v : g.members) {
        if (value_[v] >= 0) continue;
        const std::size_t mark = trail_.size();
        Assign(v, 1);
        if (Propagate()) Dfs();
        Undo(mark);
        if (stopped_) break;
        // Later siblings exclude this member.
        Assign(v, 0);
        if (!Propagate()) break;
        if (std::any_of(g.members.begin(), g.members.end(),
                        [&](int m) { return value_[m] == 1; })) {
          Dfs();  // propagation picked the last member
          break;
        }
      }
      Undo(outer);
      return;
    }

    // With every selection fixed the tie-break key is settled, so an equal
    // bound cannot beat the incumbent.
    if (!best_.empty() && bound >= best_obj_ - tol_) {
      std::vector<int> key;
      bool settled = true;
      for (std::size_t v = 0; v < value_.size() && settled; ++v) {
        if (!IsSelection(model_.variables()[v])) continue;
        if (value_[v] < 0) settled = false;
        if (value_[v] == 1) key.push_back(static_cast<int>(v));
      }
      if (settled && key >= best_key_) return;
    }

    int free_var = -1;
    for (std::size_t v = 0; v < value_.size(); ++v) {
      if (value_[v] < 0) {
        free_var = static_cast<int>(v);
        break;
      }
    }
    if (free_var < 0) {
      Record();
      return;
    }
    const int first = cost_[free_var] <= 0 ? 1 : 0;
    for (int val : {first, 1 - first}) {
      const std::size_t mark = trail_.size();
      Assign(free_var, val);
      if (Propagate()) Dfs();
      Undo(mark);
      if (stopped_) return;
    }
  }

  const MilpModel& model_;
  const SolverConfig& config_;
  const double tol_;
  std::vector<double> cost_;
  std::vector<std::int8_t> value_;
  std::vector<double> lo_, hi_, min_act_, max_act_, max_coef_;
  std::vector<int> row_start_;
  std::vector<Term> row_terms_;
  std::vector<int> col_start_;
  std::vector<ColEntry> col_entries_;
  std::vector<char> queued_;
  std::vector<int> queue_;
  std::vector<int> trail_;
  std::vector<Group> groups_;
  std::vector<std::vector<int>> implied_;
  std::vector<char> in_group_;

  Clock::time_point start_;
  std::int64_t nodes_ = 0;
  std::int64_t propagations_ = 0;
  bool stopped_ = false;
  std::vector<std::uint8_t> best_;
  std::vector<int> best_key_;
  double best_obj_ = 0;
};

}  // namespace

std::string_view SolveStatusName(SolveStatus status) {
  switch (status) {
    case SolveStatus::kOptimal: return "optimal";
    case SolveStatus::kInfeasible: return "infeasible";
    case SolveStatus::kTimeLimit: return "time_limit";
  }
  return "infeasible";
}

void ValidateSolverConfig(const SolverConfig& config) {
  if (config.time_limit_ms <= 0) {
    throw Error(ErrorCode::kInvalidArgument, "time_limit_ms must be > 0", "time_limit_ms");
  }
  if (config.node_limit <= 0) {
    throw Error(ErrorCode::kInvalidArgument, "node_limit must be > 0", "node_limit");
  }
  if (!(config.tolerance >= 0)) {
    throw Error(ErrorCode::kInvalidArgument, "tolerance must be >= 0", "tolerance");
  }
}

SolveResult Solve(const MilpModel& model, const SolverConfig& config) {
  ValidateSolverConfig(config);
  const auto start = Clock::now();
  Search search(model, config);
  const double setup_ms = MillisSince(start);
  const auto search_start = Clock::now();
  SolveResult result = search.Run();
  result.stats.load_ms = setup_ms;
  result.stats.search_ms = MillisSince(search_start);
  result.stats.wall_ms = MillisSince(start);
  return result;
}

InstanceResult SolveInstance(const SymbolicRequest& request, const Inventory& inventory,
                             const ModelParams& params, const SolverConfig& config) {
  const auto start = Clock::now();
  const Inventory filtered = PrefilterOptions(request, inventory, params);
  const MilpModel model = BuildModel(request, filtered, params);
  const double build_ms = MillisSince(start);
  InstanceResult out;
  out.result = Solve(model, config);
  out.result.stats.load_ms += build_ms;
  out.result.stats.wall_ms = MillisSince(start);
  if (!out.result.solution.empty()) out.itinerary = model.Decode(out.result.solution);
  return out;
}

InstanceResult BruteForce(const SymbolicRequest& request, const Inventory& inventory,
                          const ModelParams& params, std::int64_t cap) {
  const auto start = Clock::now();
  ValidateModelParams(params);
  const Simulator sim(request, inventory, params);
  const std::vector<Stay>& stays = sim.stays();

  std::vector<std::vector<const FlightOption*>> leg_choices(request.legs.size());
  for (std::size_t k = 0; k < request.legs.size(); ++k) {
    for (const FlightOption& f : inventory.flights) {
      if (f.origin == request.legs[k].origin && f.destination == request.legs[k].destination) {
        leg_choices[k].push_back(&f);
      }
    }
  }
  std::vector<std::vector<const HotelOption*>> stay_choices(stays.size());
  for (std::size_t s = 0; s < stays.size(); ++s) {
    if (stays[s].nights() <= 0) {
      stay_choices[s].push_back(nullptr);
      continue;
    }
    for (const HotelOption& h : inventory.hotels) {
      if (h.city == stays[s].city) stay_choices[s].push_back(&h);
    }
  }

  std::int64_t total = 1;
  auto multiply = [&](std::size_t n) {
    if (n == 0) {
      total = 0;
    } else if (total > 0) {
      if (total > cap / static_cast<std::int64_t>(n) + 1) {
        total = cap + 1;
      } else {
        total *= static_cast<std::int64_t>(n);
      }
    }
  };
  for (const auto& c : leg_choices) multiply(c.size());
  for (const auto& c : stay_choices) multiply(c.size());
  if (total > cap) {
    throw Error(ErrorCode::kCapExceeded,
                fmt::format("enumeration exceeds the cap of {} combinations", cap));
  }

  InstanceResult out;
  out.result.status = SolveStatus::kInfeasible;
  std::vector<const FlightOption*> flights(leg_choices.size());
  std::vector<const HotelOption*> hotels(stay_choices.size());
  std::vector<std::size_t> digit(leg_choices.size() + stay_choices.size(), 0);
  std::vector<const FlightOption*> best_flights;
  std::vector<const HotelOption*> best_hotels;
  double best = 0;
  std::int64_t visited = 0;
  for (std::int64_t i = 0; i < total; ++i) {
    for (std::size_t k = 0; k < leg_choices.size(); ++k) flights[k] = leg_choices[k][digit[k]];
    for (std::size_t s = 0; s < stay_choices.size(); ++s) {
      hotels[s] = stay_choices[s][digit[leg_choices.size() + s]];
    }
    ++visited;
    double objective = 0;
    if (sim.Feasible(flights, hotels, &objective) &&
        (best_flights.empty() || objective < best)) {
      best = objective;
      best_flights = flights;
      best_hotels = hotels;
    }
    for (std::size_t d = 0; d < digit.size(); ++d) {
      const std::size_t radix = d < leg_choices.size()
                                    ? leg_choices[d].size()
                                    : stay_choices[d - leg_choices.size()].size();
      if (++digit[d] < radix) break;
      digit[d] = 0;
    }
  }
  out.result.stats.nodes = visited;
  if (!best_flights.empty()) {
    Itinerary it;
    for (std::size_t k = 0; k < best_flights.size(); ++k) {
      it.flights.push_back(ChosenFlight{static_cast<int>(k), best_flights[k]->id});
    }
    for (std::size_t s = 0; s < best_hotels.size(); ++s) {
      if (best_hotels[s] == nullptr) continue;
      it.hotels.push_back(ChosenHotel{static_cast<int>(s), best_hotels[s]->id,
                                      stays[s].first_night, stays[s].end});
    }
    it.cost = sim.Check(it).cost;
    out.itinerary = std::move(it);
    out.result.status = SolveStatus::kOptimal;
    out.result.objective = best;
  }
  out.result.stats.search_ms = MillisSince(start);
  out.result.stats.wall_ms = out.result.stats.search_ms;
  return out;
}

Verdict CheckFeasible(const Itinerary& itinerary, const SymbolicRequest& request,
                      const Inventory& inventory, const ModelParams& params) {
  return EvaluateCost(itinerary, request, inventory, params);
}

}  // namespace wayplan
