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

#ifndef WAYPLAN_WAYPLAN_H_
#define WAYPLAN_WAYPLAN_H_

// C interface to the planner. Every call returns a wp_status; on failure the
// context keeps a message (and, where known, a field path or text span)
// until the next call on it. Strings returned through `char**` parameters
// are owned by the caller and released with wp_string_free. Contexts are
// not thread-safe; services are.

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define WP_API __declspec(dllexport)
#else
#define WP_API __attribute__((visibility("default")))
#endif

typedef enum wp_status {
  WP_OK = 0,
  WP_INVALID_ARGUMENT = 1,
  WP_MALFORMED_JSON = 2,
  WP_SCHEMA_VIOLATION = 3,
  WP_INVARIANT_VIOLATION = 4,
  WP_MISSING_LEGS = 5,
  WP_UNPARSABLE_SEGMENT = 6,
  WP_ENDPOINT_UNREACHABLE = 7,
  WP_INVALID_OUTPUT_AFTER_RETRIES = 8,
  WP_FILE_UNREADABLE = 9,
  WP_MAPPING_INCOMPLETE = 10,
  WP_SPAN_TOO_LONG = 11,
  WP_M_TOO_SMALL = 12,
  WP_GRID_MISMATCH = 13,
  WP_CAP_EXCEEDED = 14,
  WP_GROUND_TRUTH_INFEASIBLE = 15,
  WP_UNKNOWN_FIELD = 16,
  WP_INVALID_CONFIG = 17,
  WP_UNKNOWN_SESSION = 18,
  WP_INTERNAL = 99,
} wp_status;

typedef struct wp_context wp_context;
typedef struct wp_service wp_service;

WP_API const char* wp_version(void);
// "Ok", "InvalidArgument", ...
WP_API const char* wp_status_name(wp_status status);
WP_API void wp_string_free(char* s);

// ---------------------------------------------------------------------------
// Context and configuration.

WP_API wp_status wp_context_new(wp_context** out);
WP_API void wp_context_free(wp_context* ctx);
// Message of the last failed call, "" after success.
WP_API const char* wp_last_error(const wp_context* ctx);
// Field path or JSON pointer of the last failure, "" when unknown.
WP_API const char* wp_last_error_path(const wp_context* ctx);
// Text span of the last parse failure; returns 0 when there is none.
WP_API int wp_last_error_span(const wp_context* ctx, size_t* begin, size_t* end);

// "key = value" configuration text, a file, environment variables
// (WAYPLAN_*) or single keys. Later calls override earlier ones.
WP_API wp_status wp_config_load_text(wp_context* ctx, const char* text);
WP_API wp_status wp_config_load_file(wp_context* ctx, const char* path);
WP_API wp_status wp_config_apply_env(wp_context* ctx);
WP_API wp_status wp_config_set(wp_context* ctx, const char* key, const char* value);
WP_API wp_status wp_config_validate(wp_context* ctx);
WP_API wp_status wp_config_json(wp_context* ctx, char** json_out);

// ---------------------------------------------------------------------------
// Requests and language.

// Validates a request and returns its canonical JSON.
WP_API wp_status wp_request_canonical(wp_context* ctx, const char* request_json,
                                      char** canonical_out);
// {"is_match": bool, "mismatched_fields": [...]}
WP_API wp_status wp_exact_match(wp_context* ctx, const char* a_json, const char* b_json,
                                char** result_out);
WP_API wp_status wp_render_nl(wp_context* ctx, const char* request_json, uint64_t seed,
                              char** text_out);
WP_API wp_status wp_parse_nl(wp_context* ctx, const char* text, char** request_out);
// Uses the configured translator. Result: {request, raw_output, valid_json, attempts}.
WP_API wp_status wp_translate(wp_context* ctx, const char* text, char** result_out);

// ---------------------------------------------------------------------------
// Data generation.

// JSON-lines records generated with the configured seed and generator
// settings. `date_swap_fraction` corrupts that share of texts.
WP_API wp_status wp_generate(wp_context* ctx, int64_t first_index, int64_t count,
                             double date_swap_fraction, char** jsonl_out);
// Same, with decoy flights drawn from a CSV table tiled over the horizon.
// `column_map_json` may be NULL for the default column names.
WP_API wp_status wp_generate_with_csv(wp_context* ctx, int64_t first_index, int64_t count,
                                      double date_swap_fraction, const char* csv_path,
                                      const char* column_map_json, char** jsonl_out,
                                      char** ingest_report_out);

// ---------------------------------------------------------------------------
// Solving.

// `mode` is "min_cost", "better_hotel", "better_flight" or NULL for the
// configured one. Result: {status, objective, itinerary, stats}.
WP_API wp_status wp_solve(wp_context* ctx, const char* request_json, const char* inventory_json,
                          const char* mode, char** result_out);
WP_API wp_status wp_brute_force(wp_context* ctx, const char* request_json,
                                const char* inventory_json, const char* mode, char** result_out);
// Result: {feasible, violations: [{code, message}], cost, objective}.
WP_API wp_status wp_check(wp_context* ctx, const char* itinerary_json, const char* request_json,
                          const char* inventory_json, char** verdict_out);
// Text form of the compiled model.
WP_API wp_status wp_dump_lp(wp_context* ctx, const char* request_json, const char* inventory_json,
                            char** lp_out);

// ---------------------------------------------------------------------------
// Evaluation.

// Corpus given as JSON-lines text. `backend` as accepted by the eval
// command; `markdown_out` may be NULL.
WP_API wp_status wp_evaluate(wp_context* ctx, const char* jsonl, const char* backend,
                             int subsets, int threads, int with_timings, int include_records,
                             char** report_out, char** markdown_out);
WP_API wp_status wp_roundtrip(wp_context* ctx, const char* jsonl, char** report_out);
WP_API wp_status wp_profile(wp_context* ctx, const char* text, const char* inventory_json,
                            int repetitions, char** timings_out);

// ---------------------------------------------------------------------------
// Service.

// Snapshot of the context configuration. Fails when the dataset is unset or
// unreadable; otherwise the inventory loads in the background (watch /health).
WP_API wp_status wp_service_new(wp_context* ctx, wp_service** out);
WP_API void wp_service_free(wp_service* svc);
// Handles one request in-process: method "GET" or "POST", path "/plan",
// "/select" or "/health".
WP_API wp_status wp_service_handle(wp_service* svc, const char* method, const char* path,
                                   const char* body, int* http_status, char** body_out);
// Serves HTTP on the configured host and port (0 picks one).
WP_API wp_status wp_service_start(wp_context* ctx, wp_service* svc, int* bound_port);
// Blocks until wp_service_stop.
WP_API void wp_service_wait(wp_service* svc);
// Safe to call from any thread.
WP_API void wp_service_stop(wp_service* svc);
// Blocks until the background load finishes; returns its status.
WP_API wp_status wp_service_wait_loaded(wp_context* ctx, wp_service* svc);

#ifdef __cplusplus
}  // extern "C"
#endif

#endif  // WAYPLAN_WAYPLAN_H_
