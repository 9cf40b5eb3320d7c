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

#include "wayplan/wayplan.h"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <memory>
#include <string>

#include "json.hpp"
#include "wayplan/config.hpp"
#include "wayplan/datagen.hpp"
#include "wayplan/dataset.hpp"
#include "wayplan/error.hpp"
#include "wayplan/eval.hpp"
#include "wayplan/milp.hpp"
#include "wayplan/nl_bridge.hpp"
#include "wayplan/service.hpp"
#include "wayplan/simulate.hpp"
#include "wayplan/solver.hpp"

struct wp_context {
  wayplan::Config config;
  std::string error;
  std::string error_path;
  std::optional<wayplan::TextSpan> span;
};

struct wp_service {
  std::unique_ptr<wayplan::PlanService> service;
  std::unique_ptr<wayplan::HttpServer> server;
};

namespace {

using wayplan::Error;
using wayplan::ErrorCode;
using oj = nlohmann::ordered_json;

wp_status StatusOf(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return WP_INVALID_ARGUMENT;
    case ErrorCode::kMalformedJson: return WP_MALFORMED_JSON;
    case ErrorCode::kSchemaViolation: return WP_SCHEMA_VIOLATION;
    case ErrorCode::kInvariantViolation: return WP_INVARIANT_VIOLATION;
    case ErrorCode::kMissingLegs: return WP_MISSING_LEGS;
    case ErrorCode::kUnparsableSegment: return WP_UNPARSABLE_SEGMENT;
    case ErrorCode::kEndpointUnreachable: return WP_ENDPOINT_UNREACHABLE;
    case ErrorCode::kInvalidOutputAfterRetries: return WP_INVALID_OUTPUT_AFTER_RETRIES;
    case ErrorCode::kFileUnreadable: return WP_FILE_UNREADABLE;
    case ErrorCode::kMappingIncomplete: return WP_MAPPING_INCOMPLETE;
    case ErrorCode::kSpanTooLong: return WP_SPAN_TOO_LONG;
    case ErrorCode::kMTooSmall: return WP_M_TOO_SMALL;
    case ErrorCode::kGridMismatch: return WP_GRID_MISMATCH;
    case ErrorCode::kCapExceeded: return WP_CAP_EXCEEDED;
    case ErrorCode::kGroundTruthInfeasible: return WP_GROUND_TRUTH_INFEASIBLE;
    case ErrorCode::kUnknownField: return WP_UNKNOWN_FIELD;
    case ErrorCode::kInvalidConfig: return WP_INVALID_CONFIG;
    case ErrorCode::kUnknownSession: return WP_UNKNOWN_SESSION;
  }
  return WP_INTERNAL;
}

char* Dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out != nullptr) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

// Runs `fn`, translating exceptions into the context's error state.
template <typename Fn>
wp_status Guard(wp_context* ctx, Fn&& fn) {
  if (ctx == nullptr) return WP_INVALID_ARGUMENT;
  ctx->error.clear();
  ctx->error_path.clear();
  ctx->span.reset();
  try {
    fn();
    return WP_OK;
  } catch (const Error& e) {
    ctx->error = e.what();
    ctx->error_path = e.path();
    ctx->span = e.span();
    return StatusOf(e.code());
  } catch (const std::exception& e) {
    ctx->error = e.what();
    return WP_INTERNAL;
  }
}

void Require(const void* p, const char* name) {
  if (p == nullptr) {
    throw Error(ErrorCode::kInvalidArgument, std::string(name) + " must not be NULL", name);
  }
}

wayplan::SymbolicRequest Request(const char* json) {
  Require(json, "request_json");
  return wayplan::ParseRequest(json);
}

wayplan::Inventory InventoryOf(const char* json) {
  Require(json, "inventory_json");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::kMalformedJson, e.what());
  }
  return wayplan::InventoryFromJson(j);
}

wayplan::ModelParams ParamsFor(const wp_context* ctx, const char* mode) {
  wayplan::ModelParams params = ctx->config.model;
  if (mode != nullptr) {
    auto m = wayplan::ParseObjectiveMode(mode);
    if (!m) {
      throw Error(ErrorCode::kInvalidArgument,
                  std::string("unknown mode '") + mode + "' (min_cost, better_hotel, better_flight)",
                  "mode");
    }
    params.mode = *m;
  }
  return params;
}

oj StatsJson(const wayplan::SolveStats& s) {
  return {{"nodes", s.nodes},     {"propagations", s.propagations}, {"load_ms", s.load_ms},
          {"search_ms", s.search_ms}, {"wall_ms", s.wall_ms}};
}

oj InstanceJson(const wayplan::InstanceResult& r, const wayplan::Inventory& inventory) {
  oj j;
  j["status"] = wayplan::SolveStatusName(r.result.status);
  j["objective"] = r.result.objective ? oj(*r.result.objective) : oj(nullptr);
  j["itinerary"] = r.itinerary ? wayplan::ItineraryToJson(*r.itinerary, &inventory) : oj(nullptr);
  j["stats"] = StatsJson(r.result.stats);
  return j;
}

oj VerdictJson(const wayplan::Verdict& v) {
  oj j;
  j["feasible"] = v.feasible();
  oj violations = oj::array();
  for (const auto& x : v.violations) violations.push_back({{"code", x.code}, {"message", x.message}});
  j["violations"] = violations;
  j["cost"] = wayplan::CostToJson(v.cost);
  j["objective"] = v.objective;
  return j;
}

void Out(char** out, const std::string& value, const char* name) {
  Require(out, name);
  *out = Dup(value);
}

wayplan::GenParams GenOf(const wp_context* ctx) {
  wayplan::GenParams gen = ctx->config.gen;
  gen.rng_seed = ctx->config.seed;
  return gen;
}

}  // namespace

extern "C" {

const char* wp_version(void) { return "0.1.0"; }

const char* wp_status_name(wp_status status) {
  switch (status) {
    case WP_OK: return "Ok";
    case WP_INVALID_ARGUMENT: return "InvalidArgument";
    case WP_MALFORMED_JSON: return "MalformedJson";
    case WP_SCHEMA_VIOLATION: return "SchemaViolation";
    case WP_INVARIANT_VIOLATION: return "InvariantViolation";
    case WP_MISSING_LEGS: return "MissingLegs";
    case WP_UNPARSABLE_SEGMENT: return "UnparsableSegment";
    case WP_ENDPOINT_UNREACHABLE: return "EndpointUnreachable";
    case WP_INVALID_OUTPUT_AFTER_RETRIES: return "InvalidOutputAfterRetries";
    case WP_FILE_UNREADABLE: return "FileUnreadable";
    case WP_MAPPING_INCOMPLETE: return "MappingIncomplete";
    case WP_SPAN_TOO_LONG: return "SpanTooLong";
    case WP_M_TOO_SMALL: return "MTooSmall";
    case WP_GRID_MISMATCH: return "GridMismatch";
    case WP_CAP_EXCEEDED: return "CapExceeded";
    case WP_GROUND_TRUTH_INFEASIBLE: return "GroundTruthInfeasible";
    case WP_UNKNOWN_FIELD: return "UnknownField";
    case WP_INVALID_CONFIG: return "InvalidConfig";
    case WP_UNKNOWN_SESSION: return "UnknownSession";
    case WP_INTERNAL: return "Internal";
  }
  return "Unknown";
}

void wp_string_free(char* s) { std::free(s); }

wp_status wp_context_new(wp_context** out) {
  if (out == nullptr) return WP_INVALID_ARGUMENT;
  *out = new (std::nothrow) wp_context();
  return *out == nullptr ? WP_INTERNAL : WP_OK;
}

void wp_context_free(wp_context* ctx) { delete ctx; }

const char* wp_last_error(const wp_context* ctx) { return ctx ? ctx->error.c_str() : ""; }

const char* wp_last_error_path(const wp_context* ctx) {
  return ctx ? ctx->error_path.c_str() : "";
}

int wp_last_error_span(const wp_context* ctx, size_t* begin, size_t* end) {
  if (ctx == nullptr || !ctx->span) return 0;
  if (begin != nullptr) *begin = ctx->span->begin;
  if (end != nullptr) *end = ctx->span->end;
  return 1;
}

wp_status wp_config_load_text(wp_context* ctx, const char* text) {
  return Guard(ctx, [&] {
    Require(text, "text");
    wayplan::LoadConfigText(ctx->config, text);
  });
}

wp_status wp_config_load_file(wp_context* ctx, const char* path) {
  return Guard(ctx, [&] {
    Require(path, "path");
    wayplan::LoadConfigFile(ctx->config, path);
  });
}

wp_status wp_config_apply_env(wp_context* ctx) {
  return Guard(ctx, [&] { wayplan::ApplyEnvironment(ctx->config, [](const char* n) { return std::getenv(n); }); });
}

wp_status wp_config_set(wp_context* ctx, const char* key, const char* value) {
  return Guard(ctx, [&] {
    Require(key, "key");
    Require(value, "value");
    wayplan::SetConfigValue(ctx->config, key, value);
  });
}

wp_status wp_config_validate(wp_context* ctx) {
  return Guard(ctx, [&] { wayplan::ValidateConfig(ctx->config); });
}

wp_status wp_config_json(wp_context* ctx, char** json_out) {
  return Guard(ctx, [&] { Out(json_out, wayplan::ConfigToJson(ctx->config).dump(), "json_out"); });
}

wp_status wp_request_canonical(wp_context* ctx, const char* request_json, char** canonical_out) {
  return Guard(ctx, [&] {
    Out(canonical_out, wayplan::SerializeRequest(Request(request_json)), "canonical_out");
  });
}

wp_status wp_exact_match(wp_context* ctx, const char* a_json, const char* b_json,
                         char** result_out) {
  return Guard(ctx, [&] {
    const wayplan::MatchResult m = wayplan::ExactMatch(Request(a_json), Request(b_json));
    oj j;
    j["is_match"] = m.is_match;
    j["mismatched_fields"] = m.mismatched_fields;
    Out(result_out, j.dump(), "result_out");
  });
}

wp_status wp_render_nl(wp_context* ctx, const char* request_json, uint64_t seed,
                       char** text_out) {
  return Guard(ctx, [&] { Out(text_out, wayplan::RenderNl(Request(request_json), seed), "text_out"); });
}

wp_status wp_parse_nl(wp_context* ctx, const char* text, char** request_out) {
  return Guard(ctx, [&] {
    Require(text, "text");
    Out(request_out, wayplan::SerializeRequest(wayplan::ParseNl(text)), "request_out");
  });
}

wp_status wp_translate(wp_context* ctx, const char* text, char** result_out) {
  return Guard(ctx, [&] {
    Require(text, "text");
    const wayplan::Translation t = wayplan::Translate(text, wayplan::BackendOf(ctx->config));
    oj j;
    j["request"] = wayplan::RequestToJson(t.request);
    j["raw_output"] = t.raw_output;
    j["valid_json"] = t.valid_json;
    j["attempts"] = t.attempts;
    Out(result_out, j.dump(), "result_out");
  });
}

wp_status wp_generate(wp_context* ctx, int64_t first_index, int64_t count,
                      double date_swap_fraction, char** jsonl_out) {
  return Guard(ctx, [&] {
    wayplan::DatasetOptions options;
    options.first_index = first_index;
    options.count = count;
    options.date_swap_fraction = date_swap_fraction;
    Out(jsonl_out, wayplan::RecordsToJsonl(wayplan::GenerateDataset(GenOf(ctx), options)),
        "jsonl_out");
  });
}

wp_status wp_generate_with_csv(wp_context* ctx, int64_t first_index, int64_t count,
                               double date_swap_fraction, const char* csv_path,
                               const char* column_map_json, char** jsonl_out,
                               char** ingest_report_out) {
  return Guard(ctx, [&] {
    Require(csv_path, "csv_path");
    wayplan::ColumnMap columns = wayplan::DefaultColumnMap();
    if (column_map_json != nullptr) {
      nlohmann::json j;
      try {
        j = nlohmann::json::parse(column_map_json);
      } catch (const nlohmann::json::parse_error& e) {
        throw Error(ErrorCode::kMalformedJson, e.what(), "column_map");
      }
      columns = wayplan::ColumnMapFromJson(j);
    }
    const wayplan::BaseFlightTable base = wayplan::IngestFlightCsv(csv_path, columns);
    wayplan::GenParams gen = GenOf(ctx);
    const wayplan::BaseFlightTable tiled =
        wayplan::ReplicateDates(base, gen.horizon_begin, gen.horizon_end);
    gen.base = &tiled;
    wayplan::DatasetOptions options;
    options.first_index = first_index;
    options.count = count;
    options.date_swap_fraction = date_swap_fraction;
    const std::string jsonl = wayplan::RecordsToJsonl(wayplan::GenerateDataset(gen, options));
    oj report;
    report["rows"] = base.rows.size();
    report["skipped"] = base.skipped;
    report["skip_reasons"] = base.skip_reasons;
    report["span_begin"] = base.span_begin.ToString();
    report["span_end"] = base.span_end.ToString();
    report["replicated_rows"] = tiled.rows.size();
    Out(jsonl_out, jsonl, "jsonl_out");
    if (ingest_report_out != nullptr) *ingest_report_out = Dup(report.dump());
  });
}

wp_status wp_solve(wp_context* ctx, const char* request_json, const char* inventory_json,
                   const char* mode, char** result_out) {
  return Guard(ctx, [&] {
    const wayplan::SymbolicRequest r = Request(request_json);
    const wayplan::Inventory inv = InventoryOf(inventory_json);
    const auto result = wayplan::SolveInstance(r, inv, ParamsFor(ctx, mode), ctx->config.solver);
    Out(result_out, InstanceJson(result, inv).dump(), "result_out");
  });
}

wp_status wp_brute_force(wp_context* ctx, const char* request_json, const char* inventory_json,
                         const char* mode, char** result_out) {
  return Guard(ctx, [&] {
    const wayplan::SymbolicRequest r = Request(request_json);
    const wayplan::Inventory inv = InventoryOf(inventory_json);
    const auto result = wayplan::BruteForce(r, inv, ParamsFor(ctx, mode));
    Out(result_out, InstanceJson(result, inv).dump(), "result_out");
  });
}

wp_status wp_check(wp_context* ctx, const char* itinerary_json, const char* request_json,
                   const char* inventory_json, char** verdict_out) {
  return Guard(ctx, [&] {
    Require(itinerary_json, "itinerary_json");
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(itinerary_json);
    } catch (const nlohmann::json::parse_error& e) {
      throw Error(ErrorCode::kMalformedJson, e.what());
    }
    const wayplan::Itinerary it = wayplan::ItineraryFromJson(j);
    const wayplan::Verdict v = wayplan::CheckFeasible(it, Request(request_json),
                                                      InventoryOf(inventory_json), ctx->config.model);
    Out(verdict_out, VerdictJson(v).dump(), "verdict_out");
  });
}

wp_status wp_dump_lp(wp_context* ctx, const char* request_json, const char* inventory_json,
                     char** lp_out) {
  return Guard(ctx, [&] {
    const wayplan::SymbolicRequest r = Request(request_json);
    const wayplan::Inventory inv =
        wayplan::PrefilterOptions(r, InventoryOf(inventory_json), ctx->config.model);
    Out(lp_out, wayplan::DumpLp(wayplan::BuildModel(r, inv, ctx->config.model)), "lp_out");
  });
}

wp_status wp_evaluate(wp_context* ctx, const char* jsonl, const char* backend, int subsets,
                      int threads, int with_timings, int include_records, char** report_out,
                      char** markdown_out) {
  return Guard(ctx, [&] {
    Require(jsonl, "jsonl");
    Require(backend, "backend");
    const auto records = wayplan::RecordsFromJsonl(jsonl);
    wayplan::EvalBackend b = wayplan::ParseEvalBackend(backend);
    if (b.translator.kind == wayplan::TranslatorBackend::Kind::kExternalEndpoint) {
      const std::string url = b.translator.endpoint.url;
      b.translator.endpoint = ctx->config.endpoint;
      b.translator.endpoint.url = url;
    }
    b.corrupt_seed = ctx->config.seed;
    wayplan::EvalOptions options;
    options.subsets = subsets;
    options.threads = threads;
    options.timings = with_timings != 0;
    options.params = ctx->config.model;
    options.solver = ctx->config.solver;
    const wayplan::EvalReport report = wayplan::EvaluateCorpus(records, b, options);
    Out(report_out, wayplan::ReportToJson(report, include_records != 0).dump(2), "report_out");
    if (markdown_out != nullptr) *markdown_out = Dup(wayplan::ReportMarkdown(report));
  });
}

wp_status wp_roundtrip(wp_context* ctx, const char* jsonl, char** report_out) {
  return Guard(ctx, [&] {
    Require(jsonl, "jsonl");
    const auto report = wayplan::RoundTripCorpus(wayplan::RecordsFromJsonl(jsonl));
    Out(report_out, wayplan::RoundTripToJson(report).dump(2), "report_out");
  });
}

wp_status wp_profile(wp_context* ctx, const char* text, const char* inventory_json,
                     int repetitions, char** timings_out) {
  return Guard(ctx, [&] {
    Require(text, "text");
    const auto timings =
        wayplan::ProfilePhases(text, wayplan::BackendOf(ctx->config), InventoryOf(inventory_json),
                               repetitions, ctx->config.model, ctx->config.solver);
    Out(timings_out, wayplan::TimingsToJson(timings).dump(2), "timings_out");
  });
}

wp_status wp_service_new(wp_context* ctx, wp_service** out) {
  return Guard(ctx, [&] {
    Require(out, "out");
    const wayplan::ServiceSettings& settings = ctx->config.service;
    // Fail at startup on a missing dataset; parse errors surface on /health.
    if (settings.inventory == "dataset") {
      if (settings.dataset.empty()) {
        throw wayplan::Error(wayplan::ErrorCode::kInvalidConfig, "service.dataset is not set",
                             "service.dataset");
      }
      if (!std::ifstream(settings.dataset)) {
        throw wayplan::Error(wayplan::ErrorCode::kFileUnreadable,
                             "cannot read dataset '" + settings.dataset + "'", "service.dataset");
      }
    }
    auto svc = std::make_unique<wp_service>();
    svc->service = std::make_unique<wayplan::PlanService>(ctx->config);
    svc->service->StartBackgroundLoad();
    *out = svc.release();
  });
}

void wp_service_free(wp_service* svc) {
  if (svc == nullptr) return;
  if (svc->server) {
    svc->server->Stop();
    svc->server->Wait();
  }
  delete svc;
}

wp_status wp_service_handle(wp_service* svc, const char* method, const char* path,
                            const char* body, int* http_status, char** body_out) {
  if (svc == nullptr || method == nullptr || path == nullptr || http_status == nullptr ||
      body_out == nullptr) {
    return WP_INVALID_ARGUMENT;
  }
  try {
    const std::string m = method;
    const std::string p = path;
    const std::string b = body != nullptr ? body : "";
    wayplan::HttpReply reply;
    if (m == "GET" && p == "/health") {
      reply = svc->service->Health();
    } else if (m == "POST" && p == "/plan") {
      reply = svc->service->Plan(b);
    } else if (m == "POST" && p == "/select") {
      reply = svc->service->Select(b);
    } else {
      reply.status = 404;
      reply.body = {{"error", "NotFound"}, {"message", m + " " + p}};
    }
    *http_status = reply.status;
    *body_out = Dup(reply.body.dump());
    return WP_OK;
  } catch (const std::exception&) {
    return WP_INTERNAL;
  }
}

wp_status wp_service_start(wp_context* ctx, wp_service* svc, int* bound_port) {
  return Guard(ctx, [&] {
    Require(svc, "svc");
    svc->server = std::make_unique<wayplan::HttpServer>(*svc->service);
    const int port =
        svc->server->Start(ctx->config.service.host, ctx->config.service.port);
    if (bound_port != nullptr) *bound_port = port;
  });
}

void wp_service_wait(wp_service* svc) {
  if (svc != nullptr && svc->server) svc->server->Wait();
}

void wp_service_stop(wp_service* svc) {
  if (svc != nullptr && svc->server) svc->server->Stop();
}

wp_status wp_service_wait_loaded(wp_context* ctx, wp_service* svc) {
  return Guard(ctx, [&] {
    Require(svc, "svc");
    svc->service->WaitUntilLoaded();
    if (auto failure = svc->service->LoadFailure()) throw *failure;
  });
}

}  // extern "C"
