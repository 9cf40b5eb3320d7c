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

// Exercises the shared library through its C interface only.

#include <cstdlib>
#include <filesystem>
#include <string>

#include <gtest/gtest.h>

#include "json.hpp"
#include "wayplan/wayplan.h"

namespace {

using nlohmann::json;

class CApi : public ::testing::Test {
 protected:
  void SetUp() override { ASSERT_EQ(wp_context_new(&ctx_), WP_OK); }
  void TearDown() override { wp_context_free(ctx_); }

  // Takes ownership of a returned string.
  static std::string Take(char* s) {
    std::string out = s ? s : "";
    wp_string_free(s);
    return out;
  }

  std::string Corpus(int count) {
    char* out = nullptr;
    EXPECT_EQ(wp_generate(ctx_, 0, count, 0.0, &out), WP_OK) << wp_last_error(ctx_);
    return Take(out);
  }

  wp_context* ctx_ = nullptr;
};

TEST_F(CApi, VersionAndNames) {
  EXPECT_STREQ(wp_version(), "0.1.0");
  EXPECT_STREQ(wp_status_name(WP_OK), "Ok");
  EXPECT_STREQ(wp_status_name(WP_UNKNOWN_SESSION), "UnknownSession");
  EXPECT_STREQ(wp_status_name(static_cast<wp_status>(57)), "Unknown");
  wp_string_free(nullptr);
  wp_context_free(nullptr);
  EXPECT_EQ(wp_context_new(nullptr), WP_INVALID_ARGUMENT);
}

TEST_F(CApi, ConfigErrorsCarryPaths) {
  EXPECT_EQ(wp_config_set(ctx_, "model.slot_minutes", "30"), WP_OK);
  EXPECT_EQ(wp_config_set(ctx_, "model.colour", "red"), WP_INVALID_CONFIG);
  EXPECT_STREQ(wp_last_error_path(ctx_), "model.colour");
  EXPECT_EQ(wp_config_load_text(ctx_, "[solver]\ntime_limit_ms = soon\n"), WP_INVALID_CONFIG);
  EXPECT_NE(std::string(wp_last_error(ctx_)).find(":2"), std::string::npos);
  EXPECT_EQ(wp_config_validate(ctx_), WP_OK);
  char* cfg = nullptr;
  ASSERT_EQ(wp_config_json(ctx_, &cfg), WP_OK);
  EXPECT_EQ(json::parse(Take(cfg))["model"]["slot_minutes"], 30);
  EXPECT_EQ(wp_config_load_file(ctx_, "/nonexistent.cfg"), WP_INVALID_CONFIG);
}

TEST_F(CApi, RequestHelpers) {
  const std::string req =
      R"({"legs":[{"date":"2025-02-01","origin":"SEA","destination":"SFO"},)"
      R"({"date":"2025-02-03","origin":"SFO","destination":"SEA"}],)"
      R"("hotel":{"brands":["Hyatt","Hilton"]}})";
  char* canon = nullptr;
  ASSERT_EQ(wp_request_canonical(ctx_, req.c_str(), &canon), WP_OK);
  const json c = json::parse(Take(canon));
  EXPECT_EQ(c["trip_kind"], "round_trip");
  EXPECT_EQ(c["hotel"]["brands"][0], "Hilton");

  char* text = nullptr;
  ASSERT_EQ(wp_render_nl(ctx_, req.c_str(), 2, &text), WP_OK);
  char* back = nullptr;
  ASSERT_EQ(wp_parse_nl(ctx_, Take(text).c_str(), &back), WP_OK);
  char* match = nullptr;
  const std::string parsed = Take(back);
  ASSERT_EQ(wp_exact_match(ctx_, req.c_str(), parsed.c_str(), &match), WP_OK);
  EXPECT_EQ(json::parse(Take(match))["is_match"], true);

  char* out = nullptr;
  EXPECT_EQ(wp_request_canonical(ctx_, "{", &out), WP_MALFORMED_JSON);
  EXPECT_EQ(out, nullptr);
  EXPECT_EQ(wp_request_canonical(ctx_, R"({"legs":[],"x":0})", &out), WP_SCHEMA_VIOLATION);
  EXPECT_EQ(wp_request_canonical(ctx_, nullptr, &out), WP_INVALID_ARGUMENT);
  EXPECT_EQ(wp_parse_nl(ctx_, "", &out), WP_MISSING_LEGS);
}

TEST_F(CApi, GenerateSolveCheck) {
  const std::string corpus = Corpus(3);
  EXPECT_EQ(corpus, Corpus(3));
  const json record = json::parse(corpus.substr(0, corpus.find('\n')));
  const std::string req = record["request"].dump();
  const std::string inv = record["inventory"].dump();

  char* solved = nullptr;
  ASSERT_EQ(wp_solve(ctx_, req.c_str(), inv.c_str(), nullptr, &solved), WP_OK);
  const json s = json::parse(Take(solved));
  ASSERT_EQ(s["status"], "optimal");
  char* brute = nullptr;
  ASSERT_EQ(wp_brute_force(ctx_, req.c_str(), inv.c_str(), "min_cost", &brute), WP_OK);
  EXPECT_EQ(json::parse(Take(brute))["objective"], s["objective"]);

  char* verdict = nullptr;
  ASSERT_EQ(wp_check(ctx_, s["itinerary"].dump().c_str(), req.c_str(), inv.c_str(), &verdict),
            WP_OK);
  const json v = json::parse(Take(verdict));
  EXPECT_EQ(v["feasible"], true);
  EXPECT_EQ(v["objective"], s["objective"]);

  char* lp = nullptr;
  ASSERT_EQ(wp_dump_lp(ctx_, req.c_str(), inv.c_str(), &lp), WP_OK);
  EXPECT_NE(Take(lp).find("Subject To"), std::string::npos);

  char* out = nullptr;
  EXPECT_EQ(wp_solve(ctx_, req.c_str(), inv.c_str(), "fastest", &out), WP_INVALID_ARGUMENT);
  EXPECT_EQ(wp_config_set(ctx_, "model.max_span_days", "1"), WP_OK);
  EXPECT_EQ(wp_solve(ctx_, req.c_str(), inv.c_str(), nullptr, &out), WP_SPAN_TOO_LONG);
}

TEST_F(CApi, EvaluateAndRoundTrip) {
  const std::string corpus = Corpus(16);
  char* report = nullptr;
  char* md = nullptr;
  ASSERT_EQ(wp_evaluate(ctx_, corpus.c_str(), "template", 4, 1, 0, 0, &report, &md), WP_OK);
  const json r = json::parse(Take(report));
  EXPECT_EQ(r["em_accuracy"], 1.0);
  EXPECT_EQ(r["score"]["n"], 4);
  EXPECT_NE(Take(md).find("EM Accuracy"), std::string::npos);
  EXPECT_EQ(wp_evaluate(ctx_, corpus.c_str(), "magic", 4, 1, 0, 0, &report, nullptr),
            WP_INVALID_ARGUMENT);

  char* rt = nullptr;
  ASSERT_EQ(wp_roundtrip(ctx_, corpus.c_str(), &rt), WP_OK);
  const json t = json::parse(Take(rt));
  EXPECT_EQ(t["exact"], t["attempts"]);

  const json record = json::parse(corpus.substr(0, corpus.find('\n')));
  char* timings = nullptr;
  ASSERT_EQ(wp_profile(ctx_, record["nl_text"].get<std::string>().c_str(),
                       record["inventory"].dump().c_str(), 3, &timings),
            WP_OK);
  EXPECT_EQ(json::parse(Take(timings))["repetitions"], 3);
}

TEST_F(CApi, ServiceInProcess) {
  const auto path = std::filesystem::temp_directory_path() / "wayplan_capi_test.jsonl";
  const std::string corpus = Corpus(5);
  {
    FILE* f = std::fopen(path.c_str(), "wb");
    ASSERT_NE(f, nullptr);
    std::fwrite(corpus.data(), 1, corpus.size(), f);
    std::fclose(f);
  }
  wp_service* svc = nullptr;
  EXPECT_EQ(wp_service_new(ctx_, &svc), WP_INVALID_CONFIG);
  ASSERT_EQ(wp_config_set(ctx_, "service.dataset", "/nonexistent/x.jsonl"), WP_OK);
  EXPECT_EQ(wp_service_new(ctx_, &svc), WP_FILE_UNREADABLE);
  ASSERT_EQ(wp_config_set(ctx_, "service.dataset", path.c_str()), WP_OK);
  ASSERT_EQ(wp_service_new(ctx_, &svc), WP_OK);
  ASSERT_EQ(wp_service_wait_loaded(ctx_, svc), WP_OK);

  int status = 0;
  char* body = nullptr;
  ASSERT_EQ(wp_service_handle(svc, "GET", "/health", "", &status, &body), WP_OK);
  EXPECT_EQ(status, 200);
  EXPECT_EQ(json::parse(Take(body))["records"], 5);

  const json record = json::parse(corpus.substr(0, corpus.find('\n')));
  const std::string plan_body = json{{"text", record["nl_text"]}}.dump();
  ASSERT_EQ(wp_service_handle(svc, "POST", "/plan", plan_body.c_str(), &status, &body), WP_OK);
  EXPECT_EQ(status, 200);
  const json plan = json::parse(Take(body));
  EXPECT_EQ(plan["options"]["min_cost"]["status"], "optimal");

  ASSERT_EQ(wp_service_handle(svc, "GET", "/nowhere", "", &status, &body), WP_OK);
  EXPECT_EQ(status, 404);
  wp_string_free(body);

  int port = -1;
  ASSERT_EQ(wp_config_set(ctx_, "service.port", "0"), WP_OK);
  ASSERT_EQ(wp_service_start(ctx_, svc, &port), WP_OK);
  EXPECT_GT(port, 0);
  wp_service_stop(svc);
  wp_service_wait(svc);
  wp_service_free(svc);
  std::filesystem::remove(path);
}

TEST_F(CApi, LoadFailureReported) {
  const auto path = std::filesystem::temp_directory_path() / "wayplan_capi_bad.jsonl";
  {
    FILE* f = std::fopen(path.c_str(), "wb");
    std::fputs("{not json\n", f);
    std::fclose(f);
  }
  ASSERT_EQ(wp_config_set(ctx_, "service.dataset", path.c_str()), WP_OK);
  wp_service* svc = nullptr;
  ASSERT_EQ(wp_service_new(ctx_, &svc), WP_OK);
  EXPECT_EQ(wp_service_wait_loaded(ctx_, svc), WP_MALFORMED_JSON);
  int status = 0;
  char* body = nullptr;
  ASSERT_EQ(wp_service_handle(svc, "GET", "/health", "", &status, &body), WP_OK);
  EXPECT_EQ(status, 503);
  EXPECT_EQ(json::parse(Take(body))["status"], "error");
  wp_service_free(svc);
  std::filesystem::remove(path);
}

}  // namespace
