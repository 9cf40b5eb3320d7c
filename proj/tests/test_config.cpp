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


#include <map>
#include <string>

#include <gtest/gtest.h>

#include "wayplan/config.hpp"
#include "wayplan/error.hpp"

namespace wayplan {
namespace {

TEST(Config, Defaults) {
  const Config c;
  EXPECT_NO_THROW(ValidateConfig(c));
  EXPECT_EQ(c.model.grid.slot_minutes, 60);
  EXPECT_EQ(c.model.min_sleep_slots, 6);
  EXPECT_EQ(c.translator, "template");
  EXPECT_EQ(c.service.port, 8080);
  EXPECT_EQ(BackendOf(c).kind, TranslatorBackend::Kind::kTemplateParser);
}

TEST(Config, TextWithSections) {
  Config c;
  LoadConfigText(c, R"(
seed = 42   # comment
[model]
slot_minutes = 30
mode = better_hotel
[weights]
better_hotel.hotel = 0.25
[solver]
time_limit_ms = 2500
branch_order = index
[service]
dataset = "data/corpus.jsonl"
parallel_modes = true
)");
  EXPECT_EQ(c.seed, 42u);
  EXPECT_EQ(c.model.grid.slot_minutes, 30);
  EXPECT_EQ(c.model.mode, ObjectiveMode::kBetterHotel);
  EXPECT_DOUBLE_EQ(c.model.better_hotel.hotel, 0.25);
  EXPECT_EQ(c.solver.time_limit_ms, 2500);
  EXPECT_EQ(c.solver.branch_order, BranchOrder::kIndexAscending);
  EXPECT_EQ(c.service.dataset, "data/corpus.jsonl");
  EXPECT_TRUE(c.service.parallel_modes);
  EXPECT_NO_THROW(ValidateConfig(c));
}

TEST(Config, ErrorsNameTheLine) {
  Config c;
  try {
    LoadConfigText(c, "seed = 1\n[model]\nslot_minutes = many\n", "cfg.ini");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidConfig);
    EXPECT_EQ(e.path(), "model.slot_minutes");
    EXPECT_NE(std::string(e.what()).find("cfg.ini:3"), std::string::npos) << e.what();
  }
  EXPECT_THROW(LoadConfigText(c, "nonsense\n"), Error);
  EXPECT_THROW(LoadConfigText(c, "[model\n"), Error);
  EXPECT_THROW(LoadConfigText(c, "colour = red\n"), Error);
  EXPECT_THROW(LoadConfigFile(c, "/nonexistent/wayplan.cfg"), Error);
}

TEST(Config, EnvironmentOverrides) {
  EXPECT_EQ(EnvVarName("solver.time_limit_ms"), "WAYPLAN_SOLVER_TIME_LIMIT_MS");
  EXPECT_EQ(EnvVarName("weights.better_hotel.flight"), "WAYPLAN_WEIGHTS_BETTER_HOTEL_FLIGHT");
  const std::map<std::string, std::string> env = {{"WAYPLAN_SEED", "7"},
                                                  {"WAYPLAN_SERVICE_PORT", "9090"}};
  Config c;
  ApplyEnvironment(c, [&](const char* name) -> const char* {
    auto it = env.find(name);
    return it == env.end() ? nullptr : it->second.c_str();
  });
  EXPECT_EQ(c.seed, 7u);
  EXPECT_EQ(c.service.port, 9090);
  EXPECT_THROW(ApplyEnvironment(c, [](const char* name) -> const char* {
                 return std::string(name) == "WAYPLAN_MODEL_BIG_M" ? "x" : nullptr;
               }),
               Error);
}

TEST(Config, EveryKeyRoundTripsThroughJson) {
  Config c;
  const auto j = ConfigToJson(c);
  EXPECT_TRUE(j.contains("model"));
  EXPECT_TRUE(j.contains("service"));
  for (const std::string& key : ConfigKeys()) {
    EXPECT_FALSE(key.empty());
    EXPECT_EQ(EnvVarName(key).rfind("WAYPLAN_", 0), 0u);
  }
}

void ExpectInvalid(const std::string& key, const std::string& value) {
  Config c;
  try {
    SetConfigValue(c, key, value);
    ValidateConfig(c);
    ADD_FAILURE() << key << "=" << value;
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidConfig) << key;
  }
}

TEST(Config, Validation) {
  ExpectInvalid("model.slot_minutes", "7");
  ExpectInvalid("model.big_m", "0.5");
  ExpectInvalid("model.min_sleep_slots", "0");
  ExpectInvalid("model.mode", "cheapest");
  ExpectInvalid("solver.time_limit_ms", "0");
  ExpectInvalid("solver.branch_order", "random");
  ExpectInvalid("service.port", "70000");
  ExpectInvalid("service.inventory", "live");
  ExpectInvalid("service.threads", "0");
  ExpectInvalid("translator.backend", "oracle");
  ExpectInvalid("gen.one_way_fraction", "1.5");
  ExpectInvalid("gen.flights_per_leg_min", "0");
  ExpectInvalid("seed", "-1");
  Config c;
  SetConfigValue(c, "translator.backend", "endpoint:http://127.0.0.1:8000/v1");
  EXPECT_NO_THROW(ValidateConfig(c));
  EXPECT_EQ(BackendOf(c).endpoint.url, "http://127.0.0.1:8000/v1");
}

}  // namespace
}  // namespace wayplan
