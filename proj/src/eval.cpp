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

#include "wayplan/eval.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <set>
#include <thread>

#include <fmt/format.h>

#include "hash.hpp"
#include "wayplan/datagen.hpp"
#include "wayplan/error.hpp"
#include "wayplan/simulate.hpp"

namespace wayplan {
namespace {

double MillisSince(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
      .count();
}

[[noreturn]] void NotApplicable(std::string_view field, CorruptOp op) {
  throw Error(ErrorCode::kInvalidArgument,
              fmt::format("operation {} does not apply to {}", CorruptOpName(op), field),
              std::string(field));
}

// Whole-dollar amount at least 10% away from `amount`.
Cents PerturbAmount(std::optional<Cents> amount, std::uint64_t seed) {
  if (!amount) return Cents::Dollars(500);
  const double u = UnitInterval(SplitMix(seed));
  const double factor = u < 0.5 ? 0.5 + 0.8 * u : 1.1 + 0.8 * (u - 0.5);
  const std::int64_t dollars = std::llround(amount->AsDouble() * factor / 100.0);
  Cents out = Cents::Dollars(std::max<std::int64_t>(1, dollars));
  if (out == *amount) out = out + Cents::Dollars(1);
  return out;
}

TimeWindow ShiftWindow(TimeWindow w) {
  constexpr int kShift = 120;
  if (w.end + kShift <= kMinutesPerDay) return {w.start + kShift, w.end + kShift};
  if (w.start - kShift >= 0) return {w.start - kShift, w.end - kShift};
  return {w.start, w.end - kShift};
}

void PerturbWindows(std::optional<std::vector<LegWindow>>& windows) {
  if (!windows) {
    windows = std::vector<LegWindow>{LegWindow{0, TimeWindow{8 * 60, 12 * 60}}};
    return;
  }
  for (LegWindow& w : *windows) w.window = ShiftWindow(w.window);
}

void FlipSet(std::optional<std::vector<std::string>>& set, const std::vector<std::string>& pool,
             std::uint64_t seed) {
  if (set && set->size() > 1) {
    set->pop_back();
    return;
  }
  std::vector<std::string> candidates;
  for (const std::string& p : pool) {
    if (!set || std::find(set->begin(), set->end(), p) == set->end()) candidates.push_back(p);
  }
  const std::string pick = candidates[SplitMix(seed) % candidates.size()];
  set = std::vector<std::string>{pick};
}

void FlipBool(std::optional<bool>& flag) { flag = flag ? !*flag : true; }

bool IsPresent(const SymbolicRequest& r, std::string_view field) {
  const AirlineConstraints& a = r.airline;
  const HotelConstraints& h = r.hotel;
  if (field == "airline.price_total_max") return a.price_total_max.has_value();
  if (field == "airline.cabin_class") return a.cabin_class.has_value();
  if (field == "airline.refundable") return a.refundable.has_value();
  if (field == "airline.nonstop_only") return a.nonstop_only.has_value();
  if (field == "airline.must_not_basic_economy") return a.must_not_basic_economy.has_value();
  if (field == "airline.no_mixed_cabin") return a.no_mixed_cabin.has_value();
  if (field == "airline.avoid_red_eye") return a.avoid_red_eye.has_value();
  if (field == "airline.departure_time") return a.departure_time.has_value();
  if (field == "airline.arrival_time") return a.arrival_time.has_value();
  if (field == "airline.plane_types") return a.plane_types.has_value();
  if (field == "airline.preferred_airlines") return a.preferred_airlines.has_value();
  if (field == "hotel.daily_budget_max") return h.daily_budget_max.has_value();
  if (field == "hotel.total_budget_max") return h.total_budget_max.has_value();
  if (field == "hotel.min_rating") return h.min_rating.has_value();
  if (field == "hotel.brands") return h.brands.has_value();
  if (field == "budget.total_budget") return r.budget.total_budget.has_value();
  if (field == "budget.everyday_budget") return r.budget.everyday_budget.has_value();
  return true;  // legs
}

// The changing operation natural to a field.
CorruptOp FillingOp(std::string_view field) {
  static const std::set<std::string_view> kFlip = {
      "airline.cabin_class",     "airline.refundable",    "airline.nonstop_only",
      "airline.must_not_basic_economy", "airline.no_mixed_cabin", "airline.avoid_red_eye",
      "airline.plane_types",     "airline.preferred_airlines", "hotel.brands"};
  return kFlip.contains(field) ? CorruptOp::kFlip : CorruptOp::kPerturb;
}

Stat StatOf(const std::vector<double>& v) { return MeanStd(v); }

nlohmann::ordered_json StatToJson(const Stat& s) {
  nlohmann::ordered_json j;
  j["mean"] = s.mean;
  j["std"] = s.std;
  j["n"] = s.n;
  return j;
}

nlohmann::ordered_json BreakdownToJson(const std::map<int, BreakdownCell>& cells) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (const auto& [key, cell] : cells) {
    nlohmann::ordered_json c;
    c["count"] = cell.count;
    c["em"] = cell.em;
    c["em_accuracy"] = cell.count > 0 ? static_cast<double>(cell.em) / cell.count : 0.0;
    j[std::to_string(key)] = c;
  }
  return j;
}

RecordOutcome EvaluateRecord(const DatasetRecord& record, const EvalBackend& backend,
                             const EvalOptions& options) {
  RecordOutcome o;
  o.id = record.id;
  o.hotel_constraints = CountHotelConstraints(record.request.hotel);
  o.airline_constraints = CountAirlineConstraints(record.request.airline);
  o.cities = static_cast<int>(CitiesOf(record.request).size());
  const std::string text =
      record.nl_text.empty() ? RenderNl(record.request, record.variant_seed) : record.nl_text;

  SymbolicRequest estimate;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    Translation t = Translate(text, backend.translator, backend.transport);
    o.valid_json = t.valid_json;
    estimate = std::move(t.request);
  } catch (const Error& e) {
    o.translate_ms = MillisSince(t0);
    o.error = std::string(ErrorCodeName(e.code()));
    return o;
  }
  o.translate_ms = MillisSince(t0);
  o.translated = true;

  if (backend.corrupt_fraction > 0) {
    const std::uint64_t h = SplitMix(backend.corrupt_seed ^ Fnv1a(record.id));
    if (UnitInterval(h) < backend.corrupt_fraction) {
      if (backend.corrupt_field) {
        estimate = CorruptRequest(estimate, *backend.corrupt_field, backend.corrupt_op, SplitMix(h));
      } else {
        const auto mix = DefaultCorruptionMix();
        estimate = CorruptWithMix(estimate, mix, SplitMix(h));
      }
    }
  }

  const MatchResult match = ExactMatch(record.request, estimate);
  o.exact_match = match.is_match;
  o.mismatched_fields = match.mismatched_fields;

  ModelParams params = options.params;
  params.mode = ObjectiveMode::kMinCost;
  const QualityResult q =
      QualityScore(record.request, estimate, record.inventory, params, options.solver);
  o.score = q.score;
  return o;
}

}  // namespace

std::string_view CorruptOpName(CorruptOp op) {
  switch (op) {
    case CorruptOp::kDrop: return "drop";
    case CorruptOp::kFlip: return "flip";
    case CorruptOp::kPerturb: return "perturb";
  }
  return "?";
}

std::optional<CorruptOp> ParseCorruptOp(std::string_view name) {
  for (CorruptOp op : {CorruptOp::kDrop, CorruptOp::kFlip, CorruptOp::kPerturb}) {
    if (CorruptOpName(op) == name) return op;
  }
  return std::nullopt;
}

const std::vector<std::string>& CorruptibleFields() {
  static const std::vector<std::string> kFields = {
      "legs",
      "airline.price_total_max",
      "airline.cabin_class",
      "airline.refundable",
      "airline.nonstop_only",
      "airline.must_not_basic_economy",
      "airline.no_mixed_cabin",
      "airline.avoid_red_eye",
      "airline.departure_time",
      "airline.arrival_time",
      "airline.plane_types",
      "airline.preferred_airlines",
      "hotel.daily_budget_max",
      "hotel.total_budget_max",
      "hotel.min_rating",
      "hotel.brands",
      "budget.total_budget",
      "budget.everyday_budget",
  };
  return kFields;
}

SymbolicRequest CorruptRequest(const SymbolicRequest& request, std::string_view field,
                               CorruptOp op, std::uint64_t seed) {
  const auto& fields = CorruptibleFields();
  if (std::find(fields.begin(), fields.end(), field) == fields.end()) {
    throw Error(ErrorCode::kUnknownField, fmt::format("unknown field '{}'", field),
                std::string(field));
  }
  SymbolicRequest r = request;
  AirlineConstraints& a = r.airline;
  HotelConstraints& h = r.hotel;
  BudgetConstraints& b = r.budget;

  auto money = [&](std::optional<Cents>& slot) {
    if (op == CorruptOp::kDrop) slot.reset();
    else if (op == CorruptOp::kPerturb) slot = PerturbAmount(slot, seed);
    else NotApplicable(field, op);
  };
  auto flag = [&](std::optional<bool>& slot) {
    if (op == CorruptOp::kDrop) slot.reset();
    else if (op == CorruptOp::kFlip) FlipBool(slot);
    else NotApplicable(field, op);
  };
  auto windows = [&](std::optional<std::vector<LegWindow>>& slot) {
    if (op == CorruptOp::kDrop) slot.reset();
    else if (op == CorruptOp::kPerturb) PerturbWindows(slot);
    else NotApplicable(field, op);
  };
  auto set = [&](std::optional<std::vector<std::string>>& slot,
                 const std::vector<std::string>& pool) {
    if (op == CorruptOp::kDrop) slot.reset();
    else if (op == CorruptOp::kFlip) FlipSet(slot, pool, seed);
    else NotApplicable(field, op);
  };

  if (field == "legs") {
    if (op != CorruptOp::kPerturb) NotApplicable(field, op);
    for (TripLeg& leg : r.legs) leg.date = leg.date + 1;
  } else if (field == "airline.price_total_max") {
    money(a.price_total_max);
  } else if (field == "airline.cabin_class") {
    if (op == CorruptOp::kDrop) {
      a.cabin_class.reset();
    } else if (op == CorruptOp::kFlip) {
      a.cabin_class = a.cabin_class
                          ? static_cast<CabinClass>((static_cast<int>(*a.cabin_class) + 1) % 4)
                          : CabinClass::kCoach;
    } else {
      NotApplicable(field, op);
    }
  } else if (field == "airline.refundable") {
    flag(a.refundable);
  } else if (field == "airline.nonstop_only") {
    flag(a.nonstop_only);
  } else if (field == "airline.must_not_basic_economy") {
    flag(a.must_not_basic_economy);
  } else if (field == "airline.no_mixed_cabin") {
    flag(a.no_mixed_cabin);
  } else if (field == "airline.avoid_red_eye") {
    flag(a.avoid_red_eye);
  } else if (field == "airline.departure_time") {
    windows(a.departure_time);
  } else if (field == "airline.arrival_time") {
    windows(a.arrival_time);
  } else if (field == "airline.plane_types") {
    set(a.plane_types, PlaneTypePool());
  } else if (field == "airline.preferred_airlines") {
    set(a.preferred_airlines, AirlinePool());
  } else if (field == "hotel.daily_budget_max") {
    money(h.daily_budget_max);
  } else if (field == "hotel.total_budget_max") {
    money(h.total_budget_max);
  } else if (field == "hotel.min_rating") {
    if (op == CorruptOp::kDrop) {
      h.min_rating.reset();
    } else if (op == CorruptOp::kPerturb) {
      const int t = h.min_rating ? h.min_rating->tenths() : 25;
      h.min_rating = Rating(t <= 45 ? t + 5 : t - 5);
    } else {
      NotApplicable(field, op);
    }
  } else if (field == "hotel.brands") {
    set(h.brands, HotelBrandPool());
  } else if (field == "budget.total_budget") {
    money(b.total_budget);
  } else if (field == "budget.everyday_budget") {
    money(b.everyday_budget);
  }
  r = Canonicalize(std::move(r));
  ValidateRequest(r);
  return r;
}

std::vector<CorruptionMixEntry> DefaultCorruptionMix() {
  return {
      {"airline.must_not_basic_economy", CorruptOp::kDrop, 0.35},
      {"airline.departure_time", CorruptOp::kDrop, 0.25},
      {"airline.avoid_red_eye", CorruptOp::kDrop, 0.20},
      {"airline.arrival_time", CorruptOp::kDrop, 0.05},
      {"airline.preferred_airlines", CorruptOp::kFlip, 0.05},
      {"airline.price_total_max", CorruptOp::kPerturb, 0.05},
      {"hotel.min_rating", CorruptOp::kPerturb, 0.05},
  };
}

SymbolicRequest CorruptWithMix(const SymbolicRequest& request,
                               std::span<const CorruptionMixEntry> mix, std::uint64_t seed) {
  if (mix.empty()) throw Error(ErrorCode::kInvalidArgument, "empty corruption mix");
  double total = 0;
  for (const auto& e : mix) total += e.weight;
  if (!(total > 0)) throw Error(ErrorCode::kInvalidArgument, "corruption weights sum to 0");
  double u = UnitInterval(SplitMix(seed)) * total;
  const CorruptionMixEntry* pick = &mix.back();
  for (const auto& e : mix) {
    if (u < e.weight) {
      pick = &e;
      break;
    }
    u -= e.weight;
  }
  CorruptOp op = pick->op;
  if (op == CorruptOp::kDrop && !IsPresent(request, pick->field)) op = FillingOp(pick->field);
  return CorruptRequest(request, pick->field, op, SplitMix(seed + 1));
}

QualityResult QualityScore(const SymbolicRequest& truth, const SymbolicRequest& estimate,
                           const Inventory& inventory, const ModelParams& params,
                           const SolverConfig& config) {
  if (params.mode != ObjectiveMode::kMinCost) {
    throw Error(ErrorCode::kInvalidArgument, "quality score is defined on min-cost objectives",
                "mode");
  }
  const InstanceResult s = SolveInstance(truth, inventory, params, config);
  if (s.result.status != SolveStatus::kOptimal) {
    throw Error(ErrorCode::kGroundTruthInfeasible,
                fmt::format("ground-truth instance not solved to optimality ({})",
                            SolveStatusName(s.result.status)));
  }
  QualityResult q;
  q.true_objective = *s.result.objective;

  InstanceResult est;
  try {
    est = SolveInstance(estimate, inventory, params, config);
  } catch (const Error&) {
    return q;  // the estimate does not even compile against the inventory
  }
  if (est.result.status != SolveStatus::kOptimal || !est.itinerary) return q;
  q.estimate_solved = true;

  const Verdict v = EvaluateCost(*est.itinerary, truth, inventory, params);
  q.violations = v.Codes();
  if (!v.feasible()) return q;
  q.estimate_feasible = true;
  q.estimate_objective = v.objective;
  if (v.objective < q.true_objective - config.tolerance) {
    throw Error(ErrorCode::kInvariantViolation,
                fmt::format("estimate plan costs {} under the true request, below the optimum {}",
                            v.objective, q.true_objective));
  }
  q.score = v.objective == 0 ? 1.0 : q.true_objective / v.objective;
  return q;
}

Stat MeanStd(std::span<const double> values) {
  Stat s;
  s.n = static_cast<std::int64_t>(values.size());
  if (values.empty()) return s;
  double sum = 0;
  for (double v : values) sum += v;
  s.mean = sum / static_cast<double>(values.size());
  double sq = 0;
  for (double v : values) sq += (v - s.mean) * (v - s.mean);
  s.std = std::sqrt(sq / static_cast<double>(values.size()));
  return s;
}

EvalBackend ParseEvalBackend(std::string_view spec) {
  EvalBackend b;
  if (spec == "template") return b;
  if (spec.starts_with("endpoint:")) {
    ExternalEndpoint ep;
    ep.url = std::string(spec.substr(9));
    b.translator = TranslatorBackend::External(std::move(ep));
    ValidateBackend(b.translator);
    return b;
  }
  if (spec.starts_with("corrupt:")) {
    std::vector<std::string> parts;
    std::string_view rest = spec.substr(8);
    while (true) {
      const std::size_t colon = rest.find(':');
      parts.emplace_back(rest.substr(0, colon));
      if (colon == std::string_view::npos) break;
      rest.remove_prefix(colon + 1);
    }
    if (parts.size() > 3) {
      throw Error(ErrorCode::kInvalidArgument, "expected corrupt:FRACTION[:FIELD[:OP]]", "backend");
    }
    std::size_t used = 0;
    double fraction = -1;
    try {
      fraction = std::stod(parts[0], &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != parts[0].size() || !(fraction >= 0 && fraction <= 1)) {
      throw Error(ErrorCode::kInvalidArgument,
                  fmt::format("corruption fraction '{}' must be a number in [0, 1]", parts[0]),
                  "backend");
    }
    b.corrupt_fraction = fraction;
    if (parts.size() >= 2) {
      const auto& fields = CorruptibleFields();
      if (std::find(fields.begin(), fields.end(), parts[1]) == fields.end()) {
        throw Error(ErrorCode::kUnknownField, fmt::format("unknown field '{}'", parts[1]),
                    parts[1]);
      }
      b.corrupt_field = parts[1];
      b.corrupt_op = FillingOp(parts[1]);
    }
    if (parts.size() == 3) {
      auto op = ParseCorruptOp(parts[2]);
      if (!op) {
        throw Error(ErrorCode::kInvalidArgument,
                    fmt::format("unknown corruption '{}' (drop, flip, perturb)", parts[2]),
                    "backend");
      }
      b.corrupt_op = *op;
    }
    return b;
  }
  throw Error(ErrorCode::kInvalidArgument,
              fmt::format("unknown backend '{}' (template, endpoint:URL, corrupt:FRACTION)", spec),
              "backend");
}

void ValidateEvalOptions(const EvalOptions& options) {
  if (options.subsets < 1) throw Error(ErrorCode::kInvalidArgument, "subsets must be >= 1", "subsets");
  if (options.threads < 1) throw Error(ErrorCode::kInvalidArgument, "threads must be >= 1", "threads");
  ValidateModelParams(options.params);
  ValidateSolverConfig(options.solver);
}

EvalReport EvaluateCorpus(const std::vector<DatasetRecord>& records, const EvalBackend& backend,
                          const EvalOptions& options) {
  ValidateEvalOptions(options);
  ValidateBackend(backend.translator);
  const std::size_t n = records.size();
  std::vector<RecordOutcome> outcomes(n);

  // Each worker owns disjoint slots; results are reduced in record order.
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      outcomes[i] = EvaluateRecord(records[i], backend, options);
    }
  };
  const int threads = std::min<int>(options.threads, static_cast<int>(std::max<std::size_t>(n, 1)));
  if (threads <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }

  EvalReport report;
  report.count = static_cast<std::int64_t>(n);
  report.subsets = options.subsets;
  std::vector<double> scores;
  for (const RecordOutcome& o : outcomes) {
    scores.push_back(o.score);
    if (o.translated) ++report.translated;
    if (o.translated && o.valid_json) ++report.valid_first_attempt;
    if (o.exact_match) ++report.em_count;
    if (!o.error.empty()) ++report.failures[o.error];
    for (const std::string& f : o.mismatched_fields) ++report.error_histogram[f];
    for (auto [cells, key] : {std::pair{&report.by_hotel_constraints, o.hotel_constraints},
                              std::pair{&report.by_airline_constraints, o.airline_constraints},
                              std::pair{&report.by_cities, o.cities}}) {
      BreakdownCell& c = (*cells)[key];
      ++c.count;
      if (o.exact_match) ++c.em;
    }
  }
  if (n > 0) {
    report.em_accuracy = static_cast<double>(report.em_count) / static_cast<double>(n);
    report.valid_output_rate =
        static_cast<double>(report.valid_first_attempt) / static_cast<double>(n);
    report.score_overall = MeanStd(scores).mean;

    // Contiguous, near-equal subsets.
    std::vector<double> non_em_means;
    const std::size_t k = static_cast<std::size_t>(options.subsets);
    for (std::size_t s = 0; s < k; ++s) {
      const std::size_t begin = s * n / k;
      const std::size_t end = (s + 1) * n / k;
      if (begin == end) continue;
      std::vector<double> all;
      std::vector<double> non_em;
      for (std::size_t i = begin; i < end; ++i) {
        all.push_back(outcomes[i].score);
        if (!outcomes[i].exact_match) non_em.push_back(outcomes[i].score);
      }
      report.subset_scores.push_back(MeanStd(all).mean);
      if (!non_em.empty()) non_em_means.push_back(MeanStd(non_em).mean);
    }
    report.score = MeanStd(report.subset_scores);
    if (!non_em_means.empty()) report.non_em_score = MeanStd(non_em_means);
  }
  if (options.timings && n > 0) {
    std::vector<double> translate;
    std::vector<double> load;
    std::vector<double> solve;
    for (const RecordOutcome& o : outcomes) {
      translate.push_back(o.translate_ms / 1000.0);
    }
    // Loading and solving are timed on the ground-truth instances.
    for (const DatasetRecord& r : records) {
      ModelParams params = options.params;
      params.mode = ObjectiveMode::kMinCost;
      const InstanceResult s = SolveInstance(r.request, r.inventory, params, options.solver);
      load.push_back(s.result.stats.load_ms / 1000.0);
      solve.push_back(s.result.stats.search_ms / 1000.0);
    }
    std::vector<double> total(load.size());
    for (std::size_t i = 0; i < load.size(); ++i) total[i] = load[i] + solve[i];
    report.timings = std::map<std::string, Stat>{{"translator", StatOf(translate)},
                                                 {"loading", StatOf(load)},
                                                 {"solving", StatOf(solve)},
                                                 {"total", StatOf(total)}};
  }
  report.records = std::move(outcomes);
  return report;
}

nlohmann::ordered_json ReportToJson(const EvalReport& report, bool include_records) {
  using oj = nlohmann::ordered_json;
  oj j;
  j["count"] = report.count;
  j["translated"] = report.translated;
  j["valid_first_attempt"] = report.valid_first_attempt;
  j["em_count"] = report.em_count;
  auto optional_number = [](const std::optional<double>& v) { return v ? oj(*v) : oj(nullptr); };
  j["em_accuracy"] = optional_number(report.em_accuracy);
  j["valid_output_rate"] = optional_number(report.valid_output_rate);
  j["score_overall"] = optional_number(report.score_overall);
  j["subsets"] = report.subsets;
  j["subset_scores"] = report.subset_scores;
  j["score"] = report.score ? StatToJson(*report.score) : oj(nullptr);
  j["non_em_score"] = report.non_em_score ? StatToJson(*report.non_em_score) : oj(nullptr);
  oj breakdowns;
  breakdowns["hotel_constraints"] = BreakdownToJson(report.by_hotel_constraints);
  breakdowns["airline_constraints"] = BreakdownToJson(report.by_airline_constraints);
  breakdowns["cities"] = BreakdownToJson(report.by_cities);
  j["breakdowns"] = breakdowns;
  oj hist = oj::object();
  for (const auto& [field, count] : report.error_histogram) hist[field] = count;
  j["error_histogram"] = hist;
  oj failures = oj::object();
  for (const auto& [code, count] : report.failures) failures[code] = count;
  j["failures"] = failures;
  if (report.timings) {
    oj t;
    for (const auto& [phase, stat] : *report.timings) t[phase] = StatToJson(stat);
    j["timings"] = t;
  }
  if (include_records) {
    oj rows = oj::array();
    for (const RecordOutcome& o : report.records) {
      oj r;
      r["id"] = o.id;
      r["translated"] = o.translated;
      r["valid_json"] = o.valid_json;
      r["exact_match"] = o.exact_match;
      r["mismatched_fields"] = o.mismatched_fields;
      r["score"] = o.score;
      if (!o.error.empty()) r["error"] = o.error;
      rows.push_back(r);
    }
    j["records"] = rows;
  }
  return j;
}

std::string ReportMarkdown(const EvalReport& report) {
  std::string md;
  auto pct = [](std::int64_t num, std::int64_t den) {
    return den > 0 ? fmt::format("{:.1f}%", 100.0 * static_cast<double>(num) / static_cast<double>(den))
                   : std::string("n/a");
  };
  md += "## Translation\n\n| Records | EM Accuracy | Valid JSON |\n|---|---|---|\n";
  md += fmt::format("| {} | {} | {} |\n\n", report.count, pct(report.em_count, report.count),
                    pct(report.valid_first_attempt, report.count));

  md += "## Quality score\n\n| Subsets | Score (mean ± std) | Non-EM score (mean ± std) |\n"
        "|---|---|---|\n";
  auto stat = [](const std::optional<Stat>& s) {
    return s ? fmt::format("{:.4f} ± {:.4f}", s->mean, s->std) : std::string("n/a");
  };
  md += fmt::format("| {} | {} | {} |\n\n", report.subset_scores.size(), stat(report.score),
                    stat(report.non_em_score));

  md += "## Exact match by constraint count\n\n";
  auto table = [&](std::string_view title, const std::map<int, BreakdownCell>& cells) {
    std::string header = fmt::format("| {} |", title);
    std::string rule = "|---|";
    std::string em = "| EM Accuracy |";
    std::string count = "| # samples |";
    for (const auto& [key, cell] : cells) {
      header += fmt::format(" {} |", key);
      rule += "---|";
      em += fmt::format(" {} |", pct(cell.em, cell.count));
      count += fmt::format(" {} |", cell.count);
    }
    md += header + "\n" + rule + "\n" + em + "\n" + count + "\n\n";
  };
  table("Hotel Constraints", report.by_hotel_constraints);
  table("Airline Constraints", report.by_airline_constraints);
  table("Cities", report.by_cities);

  md += "## Error sources\n\n| Field | Mismatches |\n|---|---|\n";
  std::vector<std::pair<std::string, std::int64_t>> hist(report.error_histogram.begin(),
                                                         report.error_histogram.end());
  std::stable_sort(hist.begin(), hist.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  for (const auto& [field, count] : hist) md += fmt::format("| {} | {} |\n", field, count);
  if (!report.failures.empty()) {
    md += "\n| Translation failure | Records |\n|---|---|\n";
    for (const auto& [code, count] : report.failures) md += fmt::format("| {} | {} |\n", code, count);
  }
  md += "\n";

  if (report.timings) {
    md += "## Timing (seconds)\n\n| Phase | Mean ± std |\n|---|---|\n";
    for (const char* phase : {"translator", "loading", "solving", "total"}) {
      const auto it = report.timings->find(phase);
      if (it == report.timings->end()) continue;
      md += fmt::format("| {} | {:.3f} ± {:.3f} |\n", phase, it->second.mean, it->second.std);
    }
    md += "\n";
  }
  return md;
}

RoundTripReport RoundTripCorpus(const std::vector<DatasetRecord>& records,
                                std::size_t max_failures) {
  RoundTripReport report;
  report.records = static_cast<std::int64_t>(records.size());
  for (const DatasetRecord& r : records) {
    std::vector<std::uint64_t> seeds;
    for (int v = 0; v < kParaphraseVariants; ++v) seeds.push_back(static_cast<std::uint64_t>(v));
    if (r.variant_seed >= static_cast<std::uint64_t>(kParaphraseVariants)) {
      seeds.push_back(r.variant_seed);
    }
    for (std::uint64_t seed : seeds) {
      ++report.attempts;
      RoundTripFailure failure{r.id, seed, {}, {}};
      try {
        const SymbolicRequest back = ParseNl(RenderNl(r.request, seed));
        ++report.parsed;
        const MatchResult m = ExactMatch(r.request, back);
        if (m.is_match) {
          ++report.exact;
          continue;
        }
        failure.error = "mismatch";
        failure.mismatched_fields = m.mismatched_fields;
      } catch (const Error& e) {
        failure.error = std::string(ErrorCodeName(e.code()));
      }
      if (report.failures.size() < max_failures) report.failures.push_back(std::move(failure));
    }
  }
  return report;
}

nlohmann::ordered_json RoundTripToJson(const RoundTripReport& report) {
  nlohmann::ordered_json j;
  j["records"] = report.records;
  j["attempts"] = report.attempts;
  j["parsed"] = report.parsed;
  j["exact"] = report.exact;
  const double n = static_cast<double>(report.attempts);
  j["em_rate"] = report.attempts > 0 ? nlohmann::ordered_json(report.exact / n) : nullptr;
  j["valid_rate"] = report.attempts > 0 ? nlohmann::ordered_json(report.parsed / n) : nullptr;
  nlohmann::ordered_json failures = nlohmann::ordered_json::array();
  for (const RoundTripFailure& f : report.failures) {
    failures.push_back({{"id", f.id},
                        {"seed", f.seed},
                        {"error", f.error},
                        {"mismatched_fields", f.mismatched_fields}});
  }
  j["failures"] = failures;
  return j;
}

PhaseTimings ProfilePhases(std::string_view text, const TranslatorBackend& backend,
                           const Inventory& inventory, int repetitions,
                           const ModelParams& params, const SolverConfig& config,
                           Transport* transport) {
  if (repetitions < 1) {
    throw Error(ErrorCode::kInvalidArgument, "repetitions must be >= 1", "repetitions");
  }
  std::vector<double> translate;
  std::vector<double> load;
  std::vector<double> solve;
  std::vector<double> total;
  std::vector<double> wall;
  for (int i = 0; i < repetitions; ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    const Translation t = Translate(text, backend, transport);
    translate.push_back(MillisSince(t0) / 1000.0);
    const InstanceResult s = SolveInstance(t.request, inventory, params, config);
    load.push_back(s.result.stats.load_ms / 1000.0);
    solve.push_back(s.result.stats.search_ms / 1000.0);
    total.push_back(load.back() + solve.back());
    wall.push_back(s.result.stats.wall_ms / 1000.0);
  }
  PhaseTimings p;
  p.repetitions = repetitions;
  p.translator = MeanStd(translate);
  p.loading = MeanStd(load);
  p.solving = MeanStd(solve);
  p.total = MeanStd(total);
  p.solver_wall = MeanStd(wall);
  return p;
}

nlohmann::ordered_json TimingsToJson(const PhaseTimings& t) {
  nlohmann::ordered_json j;
  j["repetitions"] = t.repetitions;
  j["translator"] = StatToJson(t.translator);
  j["loading"] = StatToJson(t.loading);
  j["solving"] = StatToJson(t.solving);
  j["total"] = StatToJson(t.total);
  j["solver_wall"] = StatToJson(t.solver_wall);
  return j;
}

}  // namespace wayplan
