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

#ifndef WAYPLAN_EVAL_HPP_
#define WAYPLAN_EVAL_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"
#include "wayplan/dataset.hpp"
#include "wayplan/milp.hpp"
#include "wayplan/nl_bridge.hpp"
#include "wayplan/solver.hpp"

namespace wayplan {

// ---------------------------------------------------------------------------
// Controlled corruption.

enum class CorruptOp { kDrop, kFlip, kPerturb };
std::string_view CorruptOpName(CorruptOp op);
std::optional<CorruptOp> ParseCorruptOp(std::string_view name);

// Dotted paths accepted by CorruptRequest, in schema order.
const std::vector<std::string>& CorruptibleFields();

// Drop clears an optional field (absent stays absent). Flip applies to
// booleans, cabin class and sets; Perturb to amounts, windows, rating and
// leg dates. Flip and Perturb always change the request, filling absent
// fields with a value. Throws UnknownField, or InvalidArgument when the
// operation does not apply to the field.
SymbolicRequest CorruptRequest(const SymbolicRequest& request, std::string_view field_path,
                               CorruptOp op, std::uint64_t seed);

struct CorruptionMixEntry {
  std::string field;
  CorruptOp op;
  double weight;
};

// Weighted towards must_not_basic_economy, departure_time and avoid_red_eye,
// the fields a learned translator most often omits.
std::vector<CorruptionMixEntry> DefaultCorruptionMix();

// Picks one entry by weight. A drop of an absent field becomes the
// field's filling Flip or Perturb, so the result always differs.
SymbolicRequest CorruptWithMix(const SymbolicRequest& request,
                               std::span<const CorruptionMixEntry> mix, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Quality ratio.

struct QualityResult {
  double score = 0;
  double true_objective = 0;
  bool estimate_solved = false;   // the estimated request had an optimum
  bool estimate_feasible = false;  // that optimum passes the true request
  std::optional<double> estimate_objective;  // under the true request
  std::vector<std::string> violations;
};

// True optimum over the cost of the estimate's optimum under the true
// request; 0 when the estimate is unsolvable or its plan violates the true
// request. Requires min-cost mode. Throws GroundTruthInfeasible.
QualityResult QualityScore(const SymbolicRequest& truth, const SymbolicRequest& estimate,
                           const Inventory& inventory, const ModelParams& params = {},
                           const SolverConfig& config = {});

// ---------------------------------------------------------------------------
// Corpus evaluation.

struct Stat {
  double mean = 0;
  double std = 0;  // population standard deviation
  std::int64_t n = 0;
};
Stat MeanStd(std::span<const double> values);

struct EvalBackend {
  TranslatorBackend translator;
  // Fraction of records whose translation is corrupted afterwards.
  double corrupt_fraction = 0;
  // Fixed corruption; when unset the default mix is used.
  std::optional<std::string> corrupt_field;
  CorruptOp corrupt_op = CorruptOp::kFlip;
  std::uint64_t corrupt_seed = 0;
  Transport* transport = nullptr;  // not owned; null means HTTP
};

// "template", "endpoint:http://host:port/path" or
// "corrupt:FRACTION[:FIELD[:OP]]". Throws InvalidArgument.
EvalBackend ParseEvalBackend(std::string_view spec);

struct RecordOutcome {
  std::string id;
  bool translated = false;
  bool valid_json = false;
  bool exact_match = false;
  std::vector<std::string> mismatched_fields;
  double score = 0;
  std::string error;  // error code name when translation failed
  int hotel_constraints = 0;
  int airline_constraints = 0;
  int cities = 0;
  double translate_ms = 0;
  double load_ms = 0;
  double solve_ms = 0;
};

struct BreakdownCell {
  std::int64_t count = 0;
  std::int64_t em = 0;
};

struct EvalReport {
  std::int64_t count = 0;
  std::int64_t translated = 0;
  std::int64_t valid_first_attempt = 0;
  std::int64_t em_count = 0;
  // Absent on an empty corpus.
  std::optional<double> em_accuracy;
  std::optional<double> valid_output_rate;
  std::optional<double> score_overall;
  int subsets = 0;
  std::vector<double> subset_scores;  // mean score of each non-empty subset
  std::optional<Stat> score;          // over subset_scores
  std::optional<Stat> non_em_score;   // same, restricted to non-EM records
  std::map<int, BreakdownCell> by_hotel_constraints;
  std::map<int, BreakdownCell> by_airline_constraints;
  std::map<int, BreakdownCell> by_cities;
  std::map<std::string, std::int64_t> error_histogram;
  std::map<std::string, std::int64_t> failures;  // error code name -> records
  std::optional<std::map<std::string, Stat>> timings;  // seconds
  std::vector<RecordOutcome> records;
};

struct EvalOptions {
  int subsets = 8;
  ModelParams params;
  SolverConfig solver;
  int threads = 1;
  bool timings = false;
};

void ValidateEvalOptions(const EvalOptions& options);

// Records without text are rendered with their variant seed. Per-record
// failures are counted, never thrown. Reports are independent of `threads`
// (timings aside).
EvalReport EvaluateCorpus(const std::vector<DatasetRecord>& records, const EvalBackend& backend,
                          const EvalOptions& options = {});

nlohmann::ordered_json ReportToJson(const EvalReport& report, bool include_records = false);
// Translation quality, score, per-count breakdown, error sources and timing
// tables.
std::string ReportMarkdown(const EvalReport& report);

// ---------------------------------------------------------------------------
// Round trip through the grammar.

struct RoundTripFailure {
  std::string id;
  std::uint64_t seed = 0;
  std::string error;  // error code name, or "mismatch"
  std::vector<std::string> mismatched_fields;
};

struct RoundTripReport {
  std::int64_t records = 0;
  std::int64_t attempts = 0;
  std::int64_t parsed = 0;
  std::int64_t exact = 0;
  std::vector<RoundTripFailure> failures;  // first `max_failures`
};

// Renders every record with seeds 0..kParaphraseVariants-1 and its own
// variant seed, parses each text back and compares with the record.
RoundTripReport RoundTripCorpus(const std::vector<DatasetRecord>& records,
                                std::size_t max_failures = 20);
nlohmann::ordered_json RoundTripToJson(const RoundTripReport& report);

// ---------------------------------------------------------------------------
// Phase timing.

struct PhaseTimings {
  int repetitions = 0;
  Stat translator;   // seconds
  Stat loading;
  Stat solving;
  Stat total;        // loading + solving
  Stat solver_wall;  // independently timed prefilter-to-decode wall clock
};

PhaseTimings ProfilePhases(std::string_view text, const TranslatorBackend& backend,
                           const Inventory& inventory, int repetitions,
                           const ModelParams& params = {}, const SolverConfig& config = {},
                           Transport* transport = nullptr);

nlohmann::ordered_json TimingsToJson(const PhaseTimings& timings);

}  // namespace wayplan

#endif  // WAYPLAN_EVAL_HPP_
