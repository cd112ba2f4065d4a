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

#pragma once

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

#include "hostility/corpus.hpp"
#include "hostility/csv.hpp"
#include "hostility/labels.hpp"
#include "hostility/predictions.hpp"

namespace hostility {

struct BinaryConfusion {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::size_t tn = 0;

  std::size_t total() const { return tp + fp + fn + tn; }
};

inline BinaryConfusion confusion(const std::vector<int>& preds,
                                 const std::vector<int>& golds) {
  if (preds.size() != golds.size())
    throw std::invalid_argument("prediction/gold length mismatch");
  BinaryConfusion c;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    const bool p = preds[i] != 0;
    const bool g = golds[i] != 0;
    if (p && g) ++c.tp;
    else if (p) ++c.fp;
    else if (g) ++c.fn;
    else ++c.tn;
  }
  return c;
}

namespace detail {
inline double f1_from_counts(std::size_t tp, std::size_t predicted,
                             std::size_t actual) {
  if (tp == 0) return 0.0;  // precision or recall is 0 (or undefined)
  const double p = static_cast<double>(tp) / static_cast<double>(predicted);
  const double r = static_cast<double>(tp) / static_cast<double>(actual);
  return 2.0 * p * r / (p + r);
}
}  // namespace detail

// F1 of the positive class only.
inline double positive_f1(const BinaryConfusion& c) {
  return detail::f1_from_counts(c.tp, c.tp + c.fp, c.tp + c.fn);
}

// Support-weighted mean of the positive- and negative-class F1 scores.
inline double weighted_f1(const BinaryConfusion& c) {
  const double n = static_cast<double>(c.total());
  if (n == 0) throw std::invalid_argument("weighted_f1 on empty input");
  const double f1_pos = positive_f1(c);
  const double f1_neg = detail::f1_from_counts(c.tn, c.tn + c.fn, c.tn + c.fp);
  return (static_cast<double>(c.tp + c.fn) * f1_pos +
          static_cast<double>(c.tn + c.fp) * f1_neg) /
         n;
}

inline double weighted_f1(const std::vector<int>& preds,
                          const std::vector<int>& golds) {
  if (preds.empty() && golds.empty())
    throw std::invalid_argument("weighted_f1 on empty input");
  return weighted_f1(confusion(preds, golds));
}

enum class F1Mode { kTwoClassWeighted, kPositiveClass };

inline double dimension_f1(const BinaryConfusion& c, F1Mode mode) {
  return mode == F1Mode::kTwoClassWeighted ? weighted_f1(c) : positive_f1(c);
}

// Combines the four fine scores weighted by each dimension's share of
// positive examples.
inline double weighted_fine_grained(const PerDimension<double>& f1s,
                                    const PerDimension<double>& positive_supports) {
  double total = 0.0;
  for (double s : positive_supports) {
    if (s < 0) throw std::invalid_argument("negative support");
    total += s;
  }
  if (total <= 0) throw std::invalid_argument("all positive supports are zero");
  double acc = 0.0;
  for (std::size_t i = 0; i < 4; ++i) acc += positive_supports[i] / total * f1s[i];
  return acc;
}

struct MetricsReport {
  double hostile = 0.0;
  PerDimension<double> fine{};  // kDimensions order
  double weighted = 0.0;
  PerDimension<double> supports{};  // positive supports used for `weighted`
  std::size_t evaluated_posts = 0;
  std::size_t fine_subset_posts = 0;
  std::string subset;

  double f1(Dimension d) const { return fine[index(d)]; }
};

inline nlohmann::json to_json(const MetricsReport& r) {
  nlohmann::json supports = nlohmann::json::object();
  for (Dimension d : kDimensions)
    supports[std::string(dimension_name(d))] = r.supports[index(d)];
  return {{"hostile", r.hostile},
          {"defamation", r.f1(Dimension::kDefamation)},
          {"fake", r.f1(Dimension::kFake)},
          {"hate", r.f1(Dimension::kHate)},
          {"offensive", r.f1(Dimension::kOffensive)},
          {"weighted", r.weighted},
          {"supports", supports},
          {"subset",
           {{"description", r.subset},
            {"coarse_posts", r.evaluated_posts},
            {"fine_posts", r.fine_subset_posts}}}};
}

inline MetricsReport report_from_json(const nlohmann::json& j) {
  MetricsReport r;
  r.hostile = j.at("hostile").get<double>();
  for (Dimension d : kDimensions) {
    const std::string name(dimension_name(d));
    r.fine[index(d)] = j.at(name).get<double>();
    if (j.contains("supports")) r.supports[index(d)] = j["supports"].value(name, 0.0);
  }
  r.weighted = j.at("weighted").get<double>();
  if (j.contains("subset") && j["subset"].is_object()) {
    r.subset = j["subset"].value("description", std::string());
    r.evaluated_posts = j["subset"].value("coarse_posts", std::size_t{0});
    r.fine_subset_posts = j["subset"].value("fine_posts", std::size_t{0});
  }
  return r;
}

struct EvaluationOptions {
  double threshold = 0.5;
  F1Mode mode = F1Mode::kTwoClassWeighted;
  // When set, the combined score uses these positive counts instead of the
  // supports observed in the evaluation subset.
  std::optional<LabelCounts> corpus_supports;
};

namespace detail {
inline std::unordered_map<std::string, const PostPrediction*> index_predictions(
    const PredictionSet& predictions) {
  std::unordered_map<std::string, const PostPrediction*> by_id;
  for (const auto& p : predictions.posts) by_id.emplace(p.id, &p);
  return by_id;
}

inline const PostPrediction& prediction_for(
    const std::unordered_map<std::string, const PostPrediction*>& by_id,
    const std::string& id) {
  auto it = by_id.find(id);
  if (it == by_id.end()) throw DataError("no prediction for gold post '" + id + "'");
  return *it->second;
}
}  // namespace detail

// Coarse score over every gold post; fine scores over the gold-hostile
// subset using ungated fine probabilities.
inline MetricsReport evaluate(const PredictionSet& predictions, const Corpus& gold,
                              const EvaluationOptions& options = {}) {
  if (gold.empty()) throw DataError("cannot evaluate on an empty corpus");
  const auto by_id = detail::index_predictions(predictions);

  MetricsReport report;
  std::vector<int> coarse_pred, coarse_gold;
  PerDimension<std::vector<int>> fine_pred, fine_gold;
  for (const auto& post : gold) {
    const LabelSet& g = require_labels(post);
    const PostPrediction& p = detail::prediction_for(by_id, post.id);
    coarse_pred.push_back(p.coarse_probability >= options.threshold);
    coarse_gold.push_back(g.hostile);
    if (!g.hostile) continue;
    for (Dimension d : kDimensions) {
      fine_pred[index(d)].push_back(p.fine_probabilities[index(d)] >= options.threshold);
      fine_gold[index(d)].push_back(g.get(d));
    }
  }
  report.evaluated_posts = gold.size();
  report.hostile = dimension_f1(confusion(coarse_pred, coarse_gold), options.mode);

  report.fine_subset_posts = fine_gold[0].size();
  if (report.fine_subset_posts == 0)
    throw DataError("evaluation corpus has no gold-hostile posts");
  for (Dimension d : kDimensions) {
    const auto i = index(d);
    report.fine[i] = dimension_f1(confusion(fine_pred[i], fine_gold[i]), options.mode);
    report.supports[i] =
        options.corpus_supports
            ? static_cast<double>(options.corpus_supports->fine(d))
            : static_cast<double>(std::count(fine_gold[i].begin(), fine_gold[i].end(), 1));
  }
  report.weighted = weighted_fine_grained(report.fine, report.supports);
  report.subset = std::string("coarse: all posts; fine: gold-hostile posts, ungated") +
                  (options.mode == F1Mode::kTwoClassWeighted ? ", two-class weighted F1"
                                                             : ", positive-class F1") +
                  (options.corpus_supports ? ", corpus supports" : ", subset supports");
  return report;
}

struct MisclassifiedPost {
  std::string id;
  std::string text;
  LabelSet gold;
  LabelSet predicted;
  int disagreements = 0;
};

inline int count_disagreements(const LabelSet& a, const LabelSet& b) {
  int n = a.hostile != b.hostile;
  for (Dimension d : kDimensions) n += a.get(d) != b.get(d);
  return n;
}

// Posts whose gated predicted labels differ from gold in any dimension, most
// disagreeing dimensions first (stable in corpus order), at most `limit` rows.
inline std::vector<MisclassifiedPost> misclassification_report(
    const PredictionSet& predictions, const Corpus& gold, std::size_t limit) {
  const auto by_id = detail::index_predictions(predictions);
  std::vector<MisclassifiedPost> rows;
  for (const auto& post : gold) {
    const LabelSet& g = require_labels(post);
    const PostPrediction& p = detail::prediction_for(by_id, post.id);
    const int n = count_disagreements(g, p.labels);
    if (n > 0) rows.push_back({post.id, post.text, g, p.labels, n});
  }
  std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
    return a.disagreements > b.disagreements;
  });
  if (rows.size() > limit) rows.resize(limit);
  return rows;
}

inline csv::Table misclassification_table(const std::vector<MisclassifiedPost>& rows) {
  csv::Table t;
  t.header = {"id", "text", "gold", "predicted", "disagreements"};
  for (const auto& r : rows)
    t.rows.push_back({r.id, r.text, r.gold.to_string(), r.predicted.to_string(),
                      std::to_string(r.disagreements)});
  return t;
}

}  // namespace hostility
