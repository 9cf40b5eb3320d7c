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
#include <vector>

#include <gtest/gtest.h>

#include "test_support.hpp"
#include "wayplan/error.hpp"
#include "wayplan/milp.hpp"

namespace wayplan {
namespace {

using testing::At;
using testing::D;

// Every assignment of z (with the given negations), x and y: the encoded pair
// must be satisfied exactly when the implication holds.
void CheckTruthTable(int nz, unsigned negation_mask, bool x_const, bool y_const, double m) {
  const int x_var = nz;
  const int y_var = nz + 1;
  const int nvars = nz + 2;
  std::vector<Literal> z;
  for (int j = 0; j < nz; ++j) z.push_back(Literal{j, ((negation_mask >> j) & 1u) != 0});
  for (int cx = 0; cx <= (x_const ? 1 : 0); ++cx) {
    for (int cy = 0; cy <= (y_const ? 1 : 0); ++cy) {
      const Operand x = x_const ? Operand::Constant(cx) : Operand::Var(x_var);
      const Operand y = y_const ? Operand::Constant(cy) : Operand::Var(y_var);
      const auto pair = EncodeImplication(z, x, y, m, "imp");
      const auto half = EncodeConditionalLessEqual(z, x, y, m, "le");
      for (unsigned bits = 0; bits < (1u << nvars); ++bits) {
        std::vector<std::uint8_t> a(nvars);
        for (int v = 0; v < nvars; ++v) a[v] = (bits >> v) & 1u;
        bool all = true;
        for (const Literal& lit : z) all = all && (a[lit.var] != lit.negated);
        const int xv = x_const ? cx : a[x_var];
        const int yv = y_const ? cy : a[y_var];
        const bool want_eq = !all || xv == yv;
        const bool want_le = !all || xv <= yv;
        EXPECT_EQ(pair[0].IsSatisfied(a) && pair[1].IsSatisfied(a), want_eq)
            << "nz=" << nz << " neg=" << negation_mask << " bits=" << bits;
        EXPECT_EQ(half.IsSatisfied(a), want_le)
            << "nz=" << nz << " neg=" << negation_mask << " bits=" << bits;
      }
    }
  }
}

TEST(BigM, TruthTableOneToThreeLiterals) {
  for (int nz = 1; nz <= 3; ++nz) {
    for (unsigned mask = 0; mask < (1u << nz); ++mask) {
      for (int shape = 0; shape < 3; ++shape) {
        CheckTruthTable(nz, mask, shape == 1, shape == 2, 1.0);
        CheckTruthTable(nz, mask, shape == 1, shape == 2, 7.5);
      }
    }
  }
}

TEST(BigM, RejectsTooSmallM) {
  const Literal z[] = {{0, false}};
  try {
    EncodeImplication(z, Operand::Var(1), Operand::Var(2), 0.5);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kMTooSmall);
  }
  EXPECT_THROW(EncodeConditionalLessEqual(z, Operand::Constant(3), Operand::Var(2), 1.0),
               Error);
  // x <= y between binaries never needs more than 1.
  EXPECT_NO_THROW(EncodeConditionalLessEqual(z, Operand::Var(1), Operand::Var(2), 1.0));
}

SymbolicRequest TwoLegs(Date a, Date b) {
  SymbolicRequest r;
  r.legs = {{a, "BOS", "ORD"}, {b, "ORD", "BOS"}};
  return r;
}

TEST(Grid, Shape) {
  const TimeGrid g = BuildTimeGrid(TwoLegs(D(2025, 3, 10), D(2025, 3, 12)));
  EXPECT_EQ(g.days(), 3);
  EXPECT_EQ(g.num_slots(), 72);
  ASSERT_EQ(g.nights().size(), 2u);
  EXPECT_EQ(g.nights()[0], (SlotRange{22, 32}));
  EXPECT_EQ(g.nights()[1], (SlotRange{46, 56}));
  EXPECT_EQ(g.FloorSlot(At(D(2025, 3, 10), 9, 59)), 9);
  EXPECT_EQ(g.CeilSlot(At(D(2025, 3, 10), 9, 1)), 10);
  EXPECT_EQ(g.SlotStart(25), At(D(2025, 3, 11), 1));
}

TEST(Grid, QuarterHourSlots) {
  GridOptions o;
  o.slot_minutes = 15;
  const TimeGrid g = BuildTimeGrid(TwoLegs(D(2025, 3, 10), D(2025, 3, 11)), o);
  EXPECT_EQ(g.num_slots(), 192);
  EXPECT_EQ(g.nights()[0], (SlotRange{88, 128}));
}

TEST(Grid, Errors) {
  try {
    BuildTimeGrid(TwoLegs(D(2025, 3, 1), D(2025, 3, 20)));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kSpanTooLong);
  }
  GridOptions o;
  o.slot_minutes = 7;
  EXPECT_THROW(BuildTimeGrid(TwoLegs(D(2025, 3, 1), D(2025, 3, 2)), o), Error);
}

TEST(Flights, SlotsAndRedEye) {
  const TimeGrid g = BuildTimeGrid(TwoLegs(D(2025, 3, 10), D(2025, 3, 12)));
  const Date d = D(2025, 3, 10);
  auto f = testing::Flight("F", "BOS", "ORD", At(d, 9, 30), At(d, 11, 10), 100);
  EXPECT_EQ(FlightSlotsOf(f, g).depart, 9);
  EXPECT_EQ(FlightSlotsOf(f, g).land, 12);
  // A short hop still spends a full slot in the air.
  f.arrival = At(d, 9, 50);
  EXPECT_EQ(FlightSlotsOf(f, g).land, 11);
  EXPECT_TRUE(FitsGrid(FlightSlotsOf(f, g), g));
  f.departure = At(D(2025, 3, 12), 23);
  f.arrival = At(D(2025, 3, 13), 1);
  EXPECT_FALSE(FitsGrid(FlightSlotsOf(f, g), g));

  ModelParams p;
  f.departure = At(d, 23);
  EXPECT_TRUE(IsRedEye(f, p));
  f.departure = At(d, 4, 59);
  EXPECT_TRUE(IsRedEye(f, p));
  f.departure = At(d, 5);
  EXPECT_FALSE(IsRedEye(f, p));
  f.departure = At(d, 22, 59);
  EXPECT_FALSE(IsRedEye(f, p));
}

TEST(Flights, SoftPenaltyPerStartedSlot) {
  SymbolicRequest r = TwoLegs(D(2025, 3, 10), D(2025, 3, 12));
  r.airline.departure_time = std::vector<LegWindow>{{0, {8 * 60, 10 * 60}}};
  const Date d = D(2025, 3, 10);
  auto f = testing::Flight("F", "BOS", "ORD", At(d, 9), At(d, 11), 100);
  ModelParams p;
  EXPECT_EQ(SoftPenalty(f, 0, r, p), Cents(0));
  EXPECT_EQ(SoftPenalty(f, 1, r, p), Cents(0));
  f.departure = At(d, 7, 59);
  EXPECT_EQ(SoftPenalty(f, 0, r, p), Cents::Dollars(10));
  f.departure = At(d, 5, 30);
  EXPECT_EQ(SoftPenalty(f, 0, r, p), Cents::Dollars(30));
  f.departure = At(d, 10);
  EXPECT_EQ(SoftPenalty(f, 0, r, p), Cents::Dollars(10));
}

TEST(Hotels, CoverageRoundsInward) {
  const SymbolicRequest r = TwoLegs(D(2025, 3, 10), D(2025, 3, 12));
  const TimeGrid g = BuildTimeGrid(r);
  auto h = testing::Hotel("H", "ORD", 100, 40, D(2025, 3, 10), D(2025, 3, 11));
  h.earliest_checkin = 15 * 60 + 30;
  h.latest_checkout = 11 * 60;
  const auto cover = HotelCoverage(h, StaysOf(r)[0], g);
  ASSERT_FALSE(cover.empty());
  EXPECT_EQ(cover.front(), 16);
  // Second night ends at 11:00 on the 12th, slot 59 is the last covered.
  EXPECT_EQ(cover.back(), 58);
  EXPECT_TRUE(h.CoversNights(D(2025, 3, 10), D(2025, 3, 12)));
  EXPECT_FALSE(h.CoversNights(D(2025, 3, 10), D(2025, 3, 13)));
}

TEST(Prefilter, CategoricalOnly) {
  auto t = testing::Tiny();
  t.request.airline.must_not_basic_economy = true;
  t.request.airline.price_total_max = Cents::Dollars(1);  // stays in the model
  t.request.hotel.min_rating = Rating(32);
  const Inventory kept = PrefilterOptions(t.request, t.inventory);
  ASSERT_EQ(kept.flights.size(), 3u);
  EXPECT_EQ(kept.flights[1].id, "B1");
  ASSERT_EQ(kept.hotels.size(), 1u);
  EXPECT_EQ(kept.hotels[0].id, "H1");
  // A false flag places no constraint.
  t.request.airline.must_not_basic_economy = false;
  EXPECT_EQ(PrefilterOptions(t.request, t.inventory).flights.size(), 4u);
}

TEST(Model, StructureOfTinyInstance) {
  const auto t = testing::Tiny();
  const MilpModel m = BuildModel(t.request, t.inventory);
  EXPECT_EQ(m.grid.num_slots(), 72);
  EXPECT_EQ(m.locations, (std::vector<std::string>{"BOS", "ORD", "AIR"}));
  ASSERT_EQ(m.leg_flight_vars.size(), 2u);
  EXPECT_EQ(m.leg_flight_vars[0].size(), 2u);
  ASSERT_EQ(m.stay_hotel_vars.size(), 1u);
  EXPECT_EQ(m.stay_hotel_vars[0].size(), 2u);
  const auto families = m.CountByFamily();
  // One location row per slot plus one sleep row per night.
  EXPECT_EQ(families.at("commonsense"), 72 + 2);
  EXPECT_EQ(families.at("event"), 72);
  EXPECT_EQ(families.at("selection"), 3);
  EXPECT_TRUE(families.count("continuity"));
  const std::string lp = DumpLp(m);
  EXPECT_NE(lp.find("Minimize"), std::string::npos);
  EXPECT_NE(lp.find("Binary"), std::string::npos);
  EXPECT_NE(lp.find("f_A1_l0"), std::string::npos);
}

TEST(Model, GridMismatch) {
  auto t = testing::Tiny();
  t.inventory.flights[3].departure = At(D(2025, 3, 12), 23, 30);
  t.inventory.flights[3].arrival = At(D(2025, 3, 13), 1, 30);
  try {
    BuildModel(t.request, t.inventory);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kGridMismatch);
  }
}

TEST(Model, ModeCoefficients) {
  ModelParams p;
  auto f = testing::Flight("F", "BOS", "ORD", At(D(2025, 3, 10), 9), At(D(2025, 3, 10), 11), 100);
  f.cabin_class = CabinClass::kBusiness;
  auto h = testing::Hotel("H", "ORD", 100, 40, D(2025, 3, 10), D(2025, 3, 11));
  EXPECT_DOUBLE_EQ(FlightObjectiveCoef(f, p), 10000);
  EXPECT_DOUBLE_EQ(HotelObjectiveCoef(h, 2, p), 20000);
  p.mode = ObjectiveMode::kBetterHotel;
  // $100 flight at weight 1, hotel at 0.5 minus $15 per star per night.
  EXPECT_DOUBLE_EQ(FlightObjectiveCoef(f, p), 10000);
  EXPECT_DOUBLE_EQ(HotelObjectiveCoef(h, 2, p), 10000 - 2 * 4.0 * 1500);
  p.mode = ObjectiveMode::kBetterFlight;
  // Quality: business rank 2 plus 1 for non-stop.
  EXPECT_DOUBLE_EQ(FlightObjectiveCoef(f, p), 5000 - 3 * 2000);
  EXPECT_DOUBLE_EQ(HotelObjectiveCoef(h, 2, p), 20000);
}

TEST(Model, ParamValidation) {
  ModelParams p;
  EXPECT_NO_THROW(ValidateModelParams(p));
  p.big_m = 0.5;
  EXPECT_THROW(ValidateModelParams(p), Error);
  p = {};
  p.min_sleep_slots = 11;
  EXPECT_THROW(ValidateModelParams(p), Error);
}

}  // namespace
}  // namespace wayplan
