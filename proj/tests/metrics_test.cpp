// Copyright 2026 The Hostility Detection Authors.
//
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

#include <gtest/gtest.h>

#include "hostility/metrics.hpp"
#include "oracles.hpp"
#include "reported_scores.hpp"

namespace hostility {
namespace {

PerDimension<double> per_dim(double fake, double hate, double offensive, double defamation) {
  PerDimension<double> v{};
  v[index(Dimension::kFake)] = fake;
  v[index(Dimension::kHate)] = hate;
  v[index(Dimension::kOffensive)] = offensive;
  v[index(Dimension::kDefamation)] = defamation;
  return v;
}

TEST(WeightedF1, PerfectPrediction) {
  Rng rng(1);
  for (int t = 0; t < 50; ++t) {
    std::vector<int> g(1 + rng.below(30));
    for (auto& x : g) x = static_cast<int>(rng.below(2));
    EXPECT_DOUBLE_EQ(weighted_f1(g, g), 1.0);
  }
}

TEST(WeightedF1, HandComputed) {
  EXPECT_NEAR(weighted_f1({1, 0, 0, 0}, {1, 1, 0, 0}), 0.7333333333333333, 1e-12);
}

TEST(WeightedF1, SingleClassGoldAllMissed) {
  EXPECT_EQ(weighted_f1({0, 0, 0}, {1, 1, 1}), 0.0);
}

TEST(WeightedF1, Errors) {
  EXPECT_THROW(weighted_f1({1, 0}, {1}), std::invalid_argument);
  EXPECT_THROW(weighted_f1({}, {}), std::invalid_argument);
}

TEST(WeightedF1, AgreesWithEnumerationOracle) {
  Rng rng(2024);
  for (int t = 0; t < 1000; ++t) {
    const std::size_t n = 1 + rng.below(60);
    std::vector<int> p(n), g(n);
    const double bias = rng.uniform();
    for (std::size_t i = 0; i < n; ++i) {
      p[i] = rng.uniform() < bias;
      g[i] = static_cast<int>(rng.below(2));
    }
    EXPECT_NEAR(weighted_f1(p, g), oracle::weighted_f1(p, g), 1e-12);
  }
}

TEST(PositiveF1, Basic) {
  EXPECT_NEAR(positive_f1(confusion({1, 0, 0, 0}, {1, 1, 0, 0})), 2.0 / 3.0, 1e-15);
  EXPECT_EQ(positive_f1(confusion({0, 0}, {0, 0})), 0.0);
}

TEST(WeightedFineGrained, BestReportedRow) {
  const auto f1 = per_dim(0.7741, 0.5725, 0.6120, 0.42);
  const double got = weighted_fine_grained(f1, reported::corpus_supports());
  EXPECT_NEAR(got, 0.626037, 1e-6);
  EXPECT_NEAR(got, 0.6250, 0.002);
}

TEST(WeightedFineGrained, ConstantScore) {
  EXPECT_NEAR(weighted_fine_grained(per_dim(0.37, 0.37, 0.37, 0.37), reported::corpus_supports()),
              0.37, 1e-15);
}

TEST(WeightedFineGrained, SingleContributor) {
  EXPECT_DOUBLE_EQ(weighted_fine_grained(per_dim(1, 0, 0, 0), per_dim(1, 1, 1, 1)), 0.25);
}

TEST(WeightedFineGrained, ZeroSupportsThrow) {
  EXPECT_THROW(weighted_fine_grained(per_dim(1, 1, 1, 1), per_dim(0, 0, 0, 0)),
               std::invalid_argument);
  EXPECT_THROW(weighted_fine_grained(per_dim(1, 1, 1, 1), per_dim(1, -1, 1, 1)),
               std::invalid_argument);
}

TEST(WeightedFineGrained, ReportedColumnReproduced) {
  for (const auto& row : reported::kRows) {
    const auto f1 = row.fine();
    const auto s = reported::corpus_supports();
    const double got = weighted_fine_grained(f1, s);
    EXPECT_NEAR(got, oracle::weighted_sum({f1.begin(), f1.end()}, {s.begin(), s.end()}), 1e-12);
    EXPECT_NEAR(got, row.weighted, 0.015) << row.method << " " << row.model;
  }
}

TEST(WeightedFineGrained, LinearAndScaleInvariant) {
  Rng rng(8);
  for (int t = 0; t < 200; ++t) {
    PerDimension<double> a{}, b{}, s{};
    for (std::size_t i = 0; i < 4; ++i) {
      a[i] = rng.uniform();
      b[i] = rng.uniform();
      s[i] = 1.0 + rng.below(500);
    }
    const double alpha = rng.uniform() * 3, beta = rng.uniform() * 3;
    PerDimension<double> mix{}, scaled{};
    for (std::size_t i = 0; i < 4; ++i) {
      mix[i] = alpha * a[i] + beta * b[i];
      scaled[i] = s[i] * 7.5;
    }
    EXPECT_NEAR(weighted_fine_grained(mix, s),
                alpha * weighted_fine_grained(a, s) + beta * weighted_fine_grained(b, s), 1e-12);
    EXPECT_NEAR(weighted_fine_grained(a, scaled), weighted_fine_grained(a, s), 1e-12);
  }
}

LabeledPost post(std::string id, LabelSet l) { return {std::move(id), "पाठ " + id, l}; }

LabelSet hostile(Dimension d) {
  LabelSet l;
  l.hostile = true;
  l.set(d, true);
  return l;
}

PostPrediction prediction_matching(const LabeledPost& p) {
  PostPrediction r;
  r.id = p.id;
  r.coarse_probability = p.labels->hostile ? 0.9 : 0.1;
  for (Dimension d : kDimensions) r.fine_probabilities[index(d)] = p.labels->get(d) ? 0.8 : 0.2;
  r.labels = *p.labels;
  return r;
}

Corpus small_corpus() {
  return {post("a", hostile(Dimension::kFake)), post("b", hostile(Dimension::kHate)),
          post("c", LabelSet{}), post("d", LabelSet{}), post("e", hostile(Dimension::kOffensive)),
          post("f", hostile(Dimension::kDefamation))};
}

TEST(Evaluate, PerfectPredictions) {
  const Corpus gold = small_corpus();
  PredictionSet preds;
  for (const auto& p : gold) preds.posts.push_back(prediction_matching(p));
  const auto r = evaluate(preds, gold);
  EXPECT_EQ(r.hostile, 1.0);
  for (double f : r.fine) EXPECT_EQ(f, 1.0);
  EXPECT_EQ(r.weighted, 1.0);
  EXPECT_EQ(r.evaluated_posts, 6u);
  EXPECT_EQ(r.fine_subset_posts, 4u);
}

TEST(Evaluate, AllNonHostileOnHalfHostileCorpus) {
  const Corpus gold = {post("a", hostile(Dimension::kFake)), post("b", hostile(Dimension::kHate)),
                       post("c", LabelSet{}), post("d", LabelSet{})};
  PredictionSet preds;
  for (const auto& p : gold) preds.posts.push_back({p.id, 0.0, {}, LabelSet{}});
  const auto r = evaluate(preds, gold);
  // Negative class: precision 1/2, recall 1, F1 2/3 at weight 1/2.
  EXPECT_NEAR(r.hostile, 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(r.hostile, weighted_f1({0, 0, 0, 0}, {1, 1, 0, 0}), 1e-15);
}

TEST(Evaluate, FineScoresUseUngatedProbabilities) {
  const Corpus gold = small_corpus();
  PredictionSet preds;
  for (const auto& p : gold) {
    auto pr = prediction_matching(p);
    pr.coarse_probability = 0.0;  // gating would erase every fine label
    pr.labels = LabelSet{};
    preds.posts.push_back(pr);
  }
  const auto r = evaluate(preds, gold);
  EXPECT_EQ(r.weighted, 1.0);
  EXPECT_LT(r.hostile, 1.0);
}

TEST(Evaluate, SupportsFromSubsetOrCorpus) {
  const Corpus gold = small_corpus();
  PredictionSet preds;
  for (const auto& p : gold) preds.posts.push_back(prediction_matching(p));
  EXPECT_EQ(evaluate(preds, gold).supports, per_dim(1, 1, 1, 1));
  EvaluationOptions opt;
  LabelCounts counts;
  counts.fake = 1638;
  counts.hate = 1132;
  counts.offensive = 1071;
  counts.defamation = 810;
  opt.corpus_supports = counts;
  EXPECT_EQ(evaluate(preds, gold, opt).supports, reported::corpus_supports());
}

TEST(Evaluate, MissingPredictionNamed) {
  const Corpus gold = small_corpus();
  PredictionSet preds;
  for (std::size_t i = 0; i + 1 < gold.size(); ++i) preds.posts.push_back(prediction_matching(gold[i]));
  try {
    evaluate(preds, gold);
    FAIL();
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("'f'"), std::string::npos);
  }
}

TEST(Evaluate, ReportSchema) {
  const Corpus gold = small_corpus();
  PredictionSet preds;
  for (const auto& p : gold) preds.posts.push_back(prediction_matching(p));
  const auto j = to_json(evaluate(preds, gold));
  std::vector<std::string> keys;
  for (const auto& [k, v] : j.items()) keys.push_back(k);
  std::sort(keys.begin(), keys.end());
  EXPECT_EQ(keys, (std::vector<std::string>{"defamation", "fake", "hate", "hostile", "offensive",
                                            "subset", "supports", "weighted"}));
  for (const char* k : {"hostile", "defamation", "fake", "hate", "offensive", "weighted"})
    EXPECT_TRUE(j[k].is_number()) << k;
  const auto back = report_from_json(j);
  EXPECT_EQ(back.weighted, 1.0);
  EXPECT_EQ(back.supports, per_dim(1, 1, 1, 1));
}

TEST(Misclassification, PerfectIsEmpty) {
  const Corpus gold = small_corpus();
  PredictionSet preds;
  for (const auto& p : gold) preds.posts.push_back(prediction_matching(p));
  EXPECT_TRUE(misclassification_report(preds, gold, 100).empty());
}

TEST(Misclassification, OrderedByDisagreementsThenLimit) {
  const Corpus gold = small_corpus();
  PredictionSet preds;
  for (const auto& p : gold) preds.posts.push_back(prediction_matching(p));
  preds.posts[0].labels.hate = true;  // a: one wrong dimension
  preds.posts[1].labels = LabelSet{};  // b: hostile and hate wrong
  const auto rows = misclassification_report(preds, gold, 10);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].id, "b");
  EXPECT_EQ(rows[0].disagreements, 2);
  EXPECT_EQ(rows[1].id, "a");
  EXPECT_EQ(rows[1].disagreements, 1);
  EXPECT_TRUE(misclassification_report(preds, gold, 0).empty());
  EXPECT_EQ(misclassification_report(preds, gold, 1).size(), 1u);
  const auto table = misclassification_table(rows);
  EXPECT_EQ(table.header, (std::vector<std::string>{"id", "text", "gold", "predicted", "disagreements"}));
  EXPECT_EQ(table.rows[0][3], "non-hostile");
  EXPECT_EQ(table.rows[1][3], "fake,hate");
}

}  // namespace
}  // namespace hostility
