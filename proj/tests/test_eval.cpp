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


#include <cmath>
#include <set>
#include <string>

#include <gtest/gtest.h>

#include "test_support.hpp"
#include "wayplan/dataset.hpp"
#include "wayplan/error.hpp"
#include "wayplan/eval.hpp"
#include "wayplan/solver.hpp"

namespace wayplan {
namespace {

TEST(Quality, ExactMatchScoresOne) {
  const auto t = testing::Tiny();
  const QualityResult q = QualityScore(t.request, t.request, t.inventory);
  EXPECT_EQ(q.score, 1.0);
  EXPECT_EQ(q.true_objective, 49000);
  EXPECT_TRUE(q.estimate_feasible);
}

TEST(Quality, TighterEstimateCostsMore) {
  const auto t = testing::Tiny();
  SymbolicRequest est = t.request;
  est.airline.must_not_basic_economy = true;
  QualityResult q = QualityScore(t.request, est, t.inventory);
  EXPECT_DOUBLE_EQ(q.score, 49000.0 / 54000.0);
  EXPECT_EQ(q.estimate_objective, 54000);

  est = t.request;
  est.hotel.min_rating = Rating(35);
  q = QualityScore(t.request, est, t.inventory);
  EXPECT_DOUBLE_EQ(q.score, 49000.0 / 55000.0);
}

TEST(Quality, ViolatingEstimateScoresZero) {
  auto t = testing::Tiny();
  SymbolicRequest truth = t.request;
  truth.airline.must_not_basic_economy = true;
  const QualityResult q = QualityScore(truth, t.request, t.inventory);
  EXPECT_EQ(q.score, 0.0);
  EXPECT_TRUE(q.estimate_solved);
  EXPECT_FALSE(q.estimate_feasible);
  EXPECT_EQ(q.violations, (std::vector<std::string>{"airline.must_not_basic_economy"}));
  EXPECT_EQ(q.true_objective, 54000);
}

TEST(Quality, UnsolvableEstimateScoresZero) {
  const auto t = testing::Tiny();
  SymbolicRequest est = t.request;
  est.airline.price_total_max = Cents::Dollars(1);
  const QualityResult q = QualityScore(t.request, est, t.inventory);
  EXPECT_EQ(q.score, 0.0);
  EXPECT_FALSE(q.estimate_solved);
  // Dates outside the inventory leave nothing to choose.
  est = t.request;
  est.legs[1].date = est.legs[1].date + 1;
  EXPECT_EQ(QualityScore(t.request, est, t.inventory).score, 0.0);
}

TEST(Quality, Preconditions) {
  const auto t = testing::Tiny();
  SymbolicRequest truth = t.request;
  truth.airline.price_total_max = Cents::Dollars(1);
  try {
    QualityScore(truth, t.request, t.inventory);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kGroundTruthInfeasible);
  }
  ModelParams p;
  p.mode = ObjectiveMode::kBetterHotel;
  EXPECT_THROW(QualityScore(t.request, t.request, t.inventory, p), Error);
}

TEST(Corrupt, OperationsByField) {
  const SymbolicRequest r = testing::DemoRequest();
  SymbolicRequest c = CorruptRequest(r, "airline.nonstop_only", CorruptOp::kDrop, 1);
  EXPECT_FALSE(c.airline.nonstop_only);
  c = CorruptRequest(r, "airline.nonstop_only", CorruptOp::kFlip, 1);
  EXPECT_EQ(c.airline.nonstop_only, false);
  c = CorruptRequest(r, "hotel.daily_budget_max", CorruptOp::kPerturb, 1);
  EXPECT_TRUE(c.hotel.daily_budget_max);
  EXPECT_NE(c.hotel.daily_budget_max, r.hotel.daily_budget_max);
  // Filling an absent field.
  c = CorruptRequest(r, "airline.avoid_red_eye", CorruptOp::kFlip, 1);
  EXPECT_TRUE(c.airline.avoid_red_eye.has_value());
  EXPECT_EQ(CorruptRequest(r, "hotel.brands", CorruptOp::kDrop, 1), r);
  try {
    CorruptRequest(r, "airline.colour", CorruptOp::kDrop, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnknownField);
  }
  EXPECT_THROW(CorruptRequest(r, "hotel.daily_budget_max", CorruptOp::kFlip, 1), Error);
  EXPECT_EQ(CorruptibleFields().front(), "legs");
  EXPECT_EQ(CorruptibleFields().size(), 18u);
}

TEST(Corrupt, AlwaysValidFlipAndPerturbAlwaysChange) {
  const GenParams gp = testing::SmallGen(12);
  for (int i = 0; i < 80; ++i) {
    const SymbolicRequest r = GenRequest(gp, i);
    for (const std::string& f : CorruptibleFields()) {
      for (CorruptOp op : {CorruptOp::kDrop, CorruptOp::kFlip, CorruptOp::kPerturb}) {
        SymbolicRequest c;
        try {
          c = CorruptRequest(r, f, op, 1000 + i);
        } catch (const Error& e) {
          EXPECT_EQ(e.code(), ErrorCode::kInvalidArgument);
          continue;
        }
        EXPECT_NO_THROW(ValidateRequest(c)) << f;
        if (op != CorruptOp::kDrop) EXPECT_NE(c, r) << f << " " << CorruptOpName(op);
      }
    }
  }
}

TEST(Corrupt, MixAlwaysChangesAndFavorsOmissions) {
  const auto mix = DefaultCorruptionMix();
  double total = 0;
  for (const auto& e : mix) total += e.weight;
  EXPECT_NEAR(total, 1.0, 1e-12);
  const GenParams gp = testing::SmallGen(13);
  std::map<std::string, int> hits;
  for (int i = 0; i < 1000; ++i) {
    const SymbolicRequest r = GenRequest(gp, i);
    const SymbolicRequest c = CorruptWithMix(r, mix, 77 + i);
    const MatchResult m = ExactMatch(r, c);
    ASSERT_FALSE(m.is_match);
    for (const auto& f : m.mismatched_fields) ++hits[f];
  }
  EXPECT_GT(hits["airline.must_not_basic_economy"], hits["airline.departure_time"]);
  EXPECT_GT(hits["airline.departure_time"], hits["airline.arrival_time"]);
}

TEST(Stats, PopulationStd) {
  const double v[] = {1, 2, 3, 4};
  const Stat s = MeanStd(v);
  EXPECT_DOUBLE_EQ(s.mean, 2.5);
  EXPECT_DOUBLE_EQ(s.std, std::sqrt(1.25));
  EXPECT_EQ(s.n, 4);
  EXPECT_EQ(MeanStd({}).n, 0);
}

TEST(Backend, Parse) {
  EXPECT_EQ(ParseEvalBackend("template").translator.kind, TranslatorBackend::Kind::kTemplateParser);
  const EvalBackend e = ParseEvalBackend("endpoint:http://127.0.0.1:8000/v1");
  EXPECT_EQ(e.translator.kind, TranslatorBackend::Kind::kExternalEndpoint);
  EXPECT_EQ(e.translator.endpoint.url, "http://127.0.0.1:8000/v1");
  EvalBackend c = ParseEvalBackend("corrupt:0.25");
  EXPECT_DOUBLE_EQ(c.corrupt_fraction, 0.25);
  EXPECT_FALSE(c.corrupt_field);
  c = ParseEvalBackend("corrupt:1:hotel.min_rating:perturb");
  EXPECT_EQ(c.corrupt_field, "hotel.min_rating");
  EXPECT_EQ(c.corrupt_op, CorruptOp::kPerturb);
  for (const char* bad : {"", "llm", "corrupt:2", "corrupt:x", "corrupt:0.1:nope",
                          "corrupt:0.1:hotel.min_rating:shake", "endpoint:"}) {
    EXPECT_THROW(ParseEvalBackend(bad), Error) << bad;
  }
}

std::vector<DatasetRecord> Corpus(int n, std::uint64_t seed) {
  DatasetOptions o;
  o.count = n;
  return GenerateDataset(testing::SmallGen(seed), o);
}

TEST(Evaluate, TemplateBackendIsPerfect) {
  const auto records = Corpus(48, 31);
  const EvalReport r = EvaluateCorpus(records, ParseEvalBackend("template"));
  EXPECT_EQ(r.count, 48);
  EXPECT_EQ(r.em_count, 48);
  EXPECT_EQ(r.em_accuracy, 1.0);
  EXPECT_EQ(r.valid_output_rate, 1.0);
  ASSERT_TRUE(r.score);
  EXPECT_EQ(r.score->mean, 1.0);
  EXPECT_EQ(r.score->std, 0.0);
  EXPECT_EQ(r.score->n, 8);
  EXPECT_EQ(r.subset_scores.size(), 8u);
  EXPECT_FALSE(r.non_em_score);
  EXPECT_TRUE(r.error_histogram.empty());
  std::int64_t by_cities = 0;
  for (const auto& [k, cell] : r.by_cities) {
    EXPECT_TRUE(k == 2 || k == 3) << k;
    EXPECT_EQ(cell.em, cell.count);
    by_cities += cell.count;
  }
  EXPECT_EQ(by_cities, 48);
}

TEST(Evaluate, CorruptionShapesReport) {
  const auto records = Corpus(64, 32);
  EvalBackend b = ParseEvalBackend("corrupt:0.5");
  b.corrupt_seed = 4;
  EvalOptions o;
  o.subsets = 8;
  const EvalReport r = EvaluateCorpus(records, b, o);
  ASSERT_EQ(r.records.size(), 64u);
  EXPECT_GT(r.em_count, 16);
  EXPECT_LT(r.em_count, 48);
  double sum = 0;
  for (const RecordOutcome& rec : r.records) {
    EXPECT_GE(rec.score, 0.0);
    EXPECT_LE(rec.score, 1.0);
    if (rec.exact_match) EXPECT_EQ(rec.score, 1.0);
    sum += rec.score;
  }
  // Equal-size subsets: the mean of subset means is the overall mean.
  EXPECT_NEAR(r.score->mean, sum / 64, 1e-12);
  EXPECT_NEAR(*r.score_overall, sum / 64, 1e-12);
  std::int64_t mismatches = 0;
  for (const auto& [field, n] : r.error_histogram) mismatches += n;
  EXPECT_GE(mismatches, r.count - r.em_count);
  ASSERT_TRUE(r.non_em_score);
  EXPECT_LT(r.non_em_score->mean, 1.0);
  const auto json = ReportToJson(r);
  EXPECT_EQ(json["score"]["n"], 8);
  EXPECT_FALSE(json.contains("records"));
  EXPECT_TRUE(ReportToJson(r, true).contains("records"));
  const std::string md = ReportMarkdown(r);
  EXPECT_NE(md.find("| EM Accuracy |"), std::string::npos);
  EXPECT_NE(md.find("±"), std::string::npos);
}

TEST(Evaluate, ThreadsDoNotChangeTheReport) {
  const auto records = Corpus(30, 33);
  EvalBackend b = ParseEvalBackend("corrupt:0.4");
  EvalOptions one;
  EvalOptions three;
  three.threads = 3;
  EXPECT_EQ(ReportToJson(EvaluateCorpus(records, b, one), true).dump(),
            ReportToJson(EvaluateCorpus(records, b, three), true).dump());
}

TEST(Evaluate, EmptyCorpus) {
  const EvalReport r = EvaluateCorpus({}, ParseEvalBackend("template"));
  EXPECT_EQ(r.count, 0);
  EXPECT_FALSE(r.em_accuracy);
  EXPECT_FALSE(r.score);
  EXPECT_TRUE(r.subset_scores.empty());
  EXPECT_NO_THROW(ReportMarkdown(r));
  EXPECT_TRUE(ReportToJson(r)["em_accuracy"].is_null());
}

TEST(Evaluate, TranslationFailuresAreCounted) {
  auto records = Corpus(8, 34);
  records[2].nl_text = "Nothing useful here.";
  records[5].nl_text = "";
  EvalOptions o;
  o.subsets = 4;
  o.timings = true;
  const EvalReport r = EvaluateCorpus(records, ParseEvalBackend("template"), o);
  EXPECT_EQ(r.translated, 7);
  EXPECT_EQ(r.failures.at("UnparsableSegment"), 1);
  EXPECT_EQ(r.records[2].score, 0.0);
  // Missing text is rendered from the record's own seed.
  EXPECT_TRUE(r.records[5].exact_match);
  EXPECT_DOUBLE_EQ(*r.em_accuracy, 7.0 / 8.0);
  ASSERT_TRUE(r.timings);
  EXPECT_TRUE(r.timings->count("solving"));
  EvalOptions bad;
  bad.subsets = 0;
  EXPECT_THROW(EvaluateCorpus(records, ParseEvalBackend("template"), bad), Error);
}

TEST(RoundTripCorpus, AllVariants) {
  const auto records = Corpus(40, 35);
  const RoundTripReport r = RoundTripCorpus(records);
  EXPECT_EQ(r.records, 40);
  // Seeds 0..3 plus each record's own seed from 4 on.
  EXPECT_EQ(r.attempts, 40 * 4 + 36);
  EXPECT_EQ(r.exact, r.attempts);
  EXPECT_TRUE(r.failures.empty());
  EXPECT_EQ(RoundTripToJson(r)["em_rate"], 1.0);
}

TEST(Profile, PhasesAreConsistent) {
  const auto records = Corpus(1, 36);
  const PhaseTimings t = ProfilePhases(records[0].nl_text, TranslatorBackend::Template(),
                                       records[0].inventory, 5);
  EXPECT_EQ(t.repetitions, 5);
  EXPECT_EQ(t.solving.n, 5);
  EXPECT_NEAR(t.total.mean, t.loading.mean + t.solving.mean, 1e-9);
  EXPECT_GT(t.translator.mean, 0);
  EXPECT_THROW(ProfilePhases("", TranslatorBackend::Template(), records[0].inventory, 5), Error);
}

}  // namespace
}  // namespace wayplan
