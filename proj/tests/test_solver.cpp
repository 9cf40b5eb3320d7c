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


#include <cstdint>
#include <set>
#include <vector>

#include <gtest/gtest.h>

#include "test_support.hpp"
#include "wayplan/datagen.hpp"
#include "wayplan/error.hpp"
#include "wayplan/solver.hpp"

namespace wayplan {
namespace {

using testing::At;
using testing::D;

std::vector<std::string> FlightIds(const Itinerary& it) {
  std::vector<std::string> out;
  for (const auto& f : it.flights) out.push_back(f.flight_id);
  return out;
}

TEST(Solver, TinyOptimumByHand) {
  const auto t = testing::Tiny();
  const InstanceResult r = SolveInstance(t.request, t.inventory);
  ASSERT_EQ(r.result.status, SolveStatus::kOptimal);
  // A2 $150 + B2 $160 + two nights at H2 $90.
  EXPECT_EQ(*r.result.objective, 49000);
  ASSERT_TRUE(r.itinerary);
  EXPECT_EQ(FlightIds(*r.itinerary), (std::vector<std::string>{"A2", "B2"}));
  ASSERT_EQ(r.itinerary->hotels.size(), 1u);
  EXPECT_EQ(r.itinerary->hotels[0].hotel_id, "H2");
  EXPECT_EQ(r.itinerary->cost.flight_total, Cents::Dollars(310));
  EXPECT_EQ(r.itinerary->cost.hotel_total, Cents::Dollars(180));
  EXPECT_EQ(r.itinerary->cost.grand_total, Cents::Dollars(490));
}

TEST(Solver, HardConstraintsChangeTheOptimum) {
  auto t = testing::Tiny();
  t.request.airline.must_not_basic_economy = true;
  InstanceResult r = SolveInstance(t.request, t.inventory);
  ASSERT_EQ(r.result.status, SolveStatus::kOptimal);
  EXPECT_EQ(*r.result.objective, 54000);

  t.request.hotel.daily_budget_max = Cents::Dollars(100);
  t.request.hotel.total_budget_max = Cents::Dollars(179);
  r = SolveInstance(t.request, t.inventory);
  EXPECT_EQ(r.result.status, SolveStatus::kInfeasible);
  EXPECT_FALSE(r.itinerary);

  t = testing::Tiny();
  t.request.airline.price_total_max = Cents::Dollars(300);
  EXPECT_EQ(SolveInstance(t.request, t.inventory).result.status, SolveStatus::kInfeasible);
}

TEST(Solver, SleepRuleExcludesLateArrival) {
  auto t = testing::Tiny();
  // Land at 03:00 after midnight: the first night has under 6 sleepable slots.
  t.inventory.flights = {t.inventory.flights[0], t.inventory.flights[2]};
  t.inventory.flights[0].departure = At(D(2025, 3, 10), 22);
  t.inventory.flights[0].arrival = At(D(2025, 3, 11), 3);
  const InstanceResult r = SolveInstance(t.request, t.inventory);
  EXPECT_EQ(r.result.status, SolveStatus::kInfeasible);
  EXPECT_EQ(BruteForce(t.request, t.inventory).result.status, SolveStatus::kInfeasible);
}

TEST(Solver, SoftWindowsAddPenalty) {
  auto t = testing::Tiny();
  // Prefer departing the first leg between 08:00 and 10:00; A2 leaves 3 slots late.
  t.request.airline.departure_time = std::vector<LegWindow>{{0, {8 * 60, 10 * 60}}};
  const InstanceResult r = SolveInstance(t.request, t.inventory);
  ASSERT_EQ(r.result.status, SolveStatus::kOptimal);
  // A2: $150 + 4 slots late x $10 = $190 < A1 $200.
  EXPECT_EQ(FlightIds(*r.itinerary)[0], "A2");
  EXPECT_EQ(*r.result.objective, 49000 + 4000);
  EXPECT_EQ(r.itinerary->cost.soft_penalty, Cents::Dollars(40));
}

TEST(Solver, ScheduleInvariants) {
  const auto t = testing::Tiny();
  const InstanceResult r = SolveInstance(t.request, t.inventory);
  ASSERT_TRUE(r.itinerary && r.itinerary->timeline);
  const Schedule& s = *r.itinerary->timeline;
  const int T = s.num_slots();
  ASSERT_EQ(T, 72);
  std::vector<int> where(T, -1);
  for (int t2 = 0; t2 < T; ++t2) {
    int count = 0;
    for (std::size_t l = 0; l < s.locations.size(); ++l) {
      if (s.u[l][t2]) {
        ++count;
        where[t2] = static_cast<int>(l);
      }
    }
    EXPECT_EQ(count, 1) << "slot " << t2;
  }
  for (int t2 = 0; t2 + 1 < T; ++t2) {
    if (where[t2] != where[t2 + 1]) EXPECT_TRUE(s.event[t2]) << "slot " << t2;
  }
  for (const SlotRange night : {SlotRange{22, 32}, SlotRange{46, 56}}) {
    int asleep = 0;
    for (int t2 = night.begin; t2 < night.end; ++t2) asleep += s.asleep[t2];
    EXPECT_GE(asleep, 6);
  }
  EXPECT_TRUE(CheckFeasible(*r.itinerary, t.request, t.inventory).feasible());
}

TEST(Solver, CheckerRejectsTamperedPlans) {
  auto t = testing::Tiny();
  t.request.airline.must_not_basic_economy = true;
  t.request.hotel.daily_budget_max = Cents::Dollars(100);
  Itinerary it;
  it.flights = {{0, "A2"}, {1, "B2"}};
  it.hotels = {{0, "H1", D(2025, 3, 10), D(2025, 3, 12)}};
  Verdict v = CheckFeasible(it, t.request, t.inventory);
  EXPECT_TRUE(v.Has("airline.must_not_basic_economy"));
  EXPECT_TRUE(v.Has("hotel.daily_budget_max"));
  EXPECT_EQ(v.cost.grand_total, Cents::Dollars(150 + 160 + 240));

  it.flights = {{0, "A1"}};
  v = CheckFeasible(it, t.request, t.inventory);
  EXPECT_TRUE(v.Has("flight.missing"));
  it.flights = {{0, "A1"}, {1, "ZZ"}};
  EXPECT_TRUE(CheckFeasible(it, t.request, t.inventory).Has("flight.unknown"));
}

TEST(Solver, TieBreakIsDeterministic) {
  auto t = testing::Tiny();
  // Two identical cheapest return flights; the smaller variable wins.
  t.inventory.flights[2].price = Cents::Dollars(160);
  for (int i = 0; i < 3; ++i) {
    const InstanceResult r = SolveInstance(t.request, t.inventory);
    EXPECT_EQ(FlightIds(*r.itinerary)[1], "B1");
  }
  SolverConfig by_index;
  by_index.branch_order = BranchOrder::kIndexAscending;
  EXPECT_EQ(FlightIds(*SolveInstance(t.request, t.inventory, {}, by_index).itinerary)[1], "B1");
}

TEST(Solver, NodeLimitReportsTimeLimit) {
  const GenParams gp = testing::SmallGen(11);
  const SymbolicRequest r = GenRequest(gp, 3);
  const Inventory inv = GenInventory(gp, r);
  SolverConfig cfg;
  cfg.node_limit = 1;
  const InstanceResult res = SolveInstance(r, inv, {}, cfg);
  EXPECT_EQ(res.result.status, SolveStatus::kTimeLimit);
  cfg.node_limit = 0;
  EXPECT_THROW(SolveInstance(r, inv, {}, cfg), Error);
}

TEST(Solver, BruteForceCap) {
  const GenParams gp = testing::SmallGen(11);
  const SymbolicRequest r = GenRequest(gp, 3);
  try {
    BruteForce(r, GenInventory(gp, r), {}, 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kCapExceeded);
  }
}

TEST(Solver, AgreesWithEnumerationAcrossModes) {
  const GenParams gp = testing::SmallGen(5);
  int optimal = 0;
  for (int i = 0; i < 40; ++i) {
    const SymbolicRequest r = GenRequest(gp, i);
    const Inventory inv = GenInventory(gp, r);
    for (ObjectiveMode mode : {ObjectiveMode::kMinCost, ObjectiveMode::kBetterHotel,
                               ObjectiveMode::kBetterFlight}) {
      ModelParams p;
      p.mode = mode;
      const InstanceResult s = SolveInstance(r, inv, p);
      const InstanceResult b = BruteForce(r, inv, p);
      ASSERT_EQ(s.result.status, b.result.status) << "instance " << i;
      if (s.result.status != SolveStatus::kOptimal) continue;
      ++optimal;
      EXPECT_EQ(*s.result.objective, *b.result.objective) << "instance " << i;
      const Verdict v = CheckFeasible(*s.itinerary, r, inv, p);
      EXPECT_TRUE(v.feasible()) << "instance " << i;
      EXPECT_EQ(v.objective, *s.result.objective);
    }
  }
  EXPECT_GT(optimal, 60);
}

TEST(Solver, ObserverSeesBounds) {
  const auto t = testing::Tiny();
  SolverConfig cfg;
  std::int64_t calls = 0;
  cfg.observer = [&](double, std::span<const std::int8_t> x) {
    ++calls;
    EXPECT_FALSE(x.empty());
  };
  const InstanceResult r = SolveInstance(t.request, t.inventory, {}, cfg);
  EXPECT_EQ(r.result.status, SolveStatus::kOptimal);
  EXPECT_GT(calls, 0);
  EXPECT_EQ(calls, r.result.stats.nodes);
}

}  // namespace
}  // namespace wayplan
