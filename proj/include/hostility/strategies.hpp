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

#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "hostility/corpus.hpp"
#include "hostility/encoder.hpp"
#include "hostility/head.hpp"
#include "hostility/labels.hpp"
#include "hostility/losses.hpp"
#include "hostility/metrics.hpp"
#include "hostility/optimizer.hpp"
#include "hostility/predictions.hpp"
#include "hostility/textprep.hpp"
#include "hostility/tiny_encoder.hpp"

namespace hostility {

enum class Strategy { kMlc, kMtl, kBc, kAux };

inline std::string_view strategy_name(Strategy s) {
  switch (s) {
    case Strategy::kMlc: return "MLC";
    case Strategy::kMtl: return "MTL";
    case Strategy::kBc: return "BC";
    case Strategy::kAux: return "AUX";
  }
  return "?";
}

inline Strategy strategy_from_name(std::string_view name) {
  for (Strategy s : {Strategy::kMlc, Strategy::kMtl, Strategy::kBc, Strategy::kAux})
    if (strategy_name(s) == name) return s;
  throw DataError("unknown strategy '" + std::string(name) +
                  "' (expected MLC, MTL, BC or AUX)");
}

struct StrategyConfig {
  Strategy strategy = Strategy::kAux;
  double learning_rate = 1e-5;
  std::size_t batch_size = 16;
  std::size_t epochs = 10;
  std::uint64_t seed = 0;
  double lambda_fine = 0.5;
  double threshold = 0.5;
  EncoderSpec encoder;
  double dropout = 0.3;
  std::size_t patience = 3;       // epochs without validation improvement
  bool fine_tune_encoder = true;  // false freezes encoder weights

  void validate() const {
    if (!(learning_rate > 0)) throw DataError("learning_rate must be > 0");
    if (batch_size == 0) throw DataError("batch_size must be >= 1");
    if (epochs == 0) throw DataError("epochs must be >= 1");
    if (lambda_fine < 0) throw DataError("lambda_fine must be >= 0");
    if (!(threshold > 0 && threshold < 1)) throw DataError("threshold must be in (0, 1)");
    if (dropout < 0 || dropout >= 1) throw DataError("dropout must be in [0, 1)");
    if (patience == 0) throw DataError("patience must be >= 1");
  }
};

inline void to_json(nlohmann::json& j, const StrategyConfig& c) {
  j = {{"strategy", strategy_name(c.strategy)},
       {"learning_rate", c.learning_rate},
       {"batch_size", c.batch_size},
       {"epochs", c.epochs},
       {"seed", c.seed},
       {"lambda_fine", c.lambda_fine},
       {"threshold", c.threshold},
       {"encoder", c.encoder},
       {"dropout", c.dropout},
       {"patience", c.patience},
       {"fine_tune_encoder", c.fine_tune_encoder}};
}

inline void from_json(const nlohmann::json& j, StrategyConfig& c) {
  StrategyConfig def;
  c.strategy = strategy_from_name(j.at("strategy").get<std::string>());
  c.learning_rate = j.value("learning_rate", def.learning_rate);
  c.batch_size = j.value("batch_size", def.batch_size);
  c.epochs = j.value("epochs", def.epochs);
  c.seed = j.value("seed", def.seed);
  c.lambda_fine = j.value("lambda_fine", def.lambda_fine);
  c.threshold = j.value("threshold", def.threshold);
  c.encoder = j.contains("encoder") ? j["encoder"].get<EncoderSpec>() : def.encoder;
  c.dropout = j.value("dropout", def.dropout);
  c.patience = j.value("patience", def.patience);
  c.fine_tune_encoder = j.value("fine_tune_encoder", def.fine_tune_encoder);
  c.validate();
}

struct NamedHead {
  std::string task;  // coarse | joint | fake | hate | offensive | defamation
  ClassifierHead head;
};

// One encoder plus the heads reading its first-token representation.
class ModelUnit {
 public:
  std::string role;
  std::unique_ptr<Encoder> encoder;
  std::vector<NamedHead> heads;
  // Heads read [first-token rep ++ auxiliary coarse logit].
  bool fuses_auxiliary = false;

  ModelUnit() = default;
  ModelUnit(ModelUnit&&) noexcept = default;
  ModelUnit& operator=(ModelUnit&&) noexcept = default;
  ModelUnit(const ModelUnit& o)
      : role(o.role),
        encoder(o.encoder ? o.encoder->clone() : nullptr),
        heads(o.heads),
        fuses_auxiliary(o.fuses_auxiliary) {}
  ModelUnit& operator=(const ModelUnit& o) {
    if (this != &o) *this = ModelUnit(o);
    return *this;
  }

  const ClassifierHead& head(std::string_view task) const {
    for (const auto& h : heads)
      if (h.task == task) return h.head;
    throw std::out_of_range("unit '" + role + "' has no head '" + std::string(task) + "'");
  }
};

struct HistoryEntry {
  std::size_t epoch = 0;
  std::string split;  // train | validation
  std::string task;   // stage name
  double loss = 0.0;
  double weighted_f1 = 0.0;
};

inline nlohmann::json to_json(const HistoryEntry& h) {
  return {{"epoch", h.epoch},
          {"split", h.split},
          {"task", h.task},
          {"loss", h.loss},
          {"weighted_f1", h.weighted_f1}};
}

struct TrainedBundle {
  Strategy strategy = Strategy::kAux;
  StrategyConfig config;
  std::vector<ModelUnit> units;
  std::vector<HistoryEntry> history;

  const ModelUnit& unit(std::string_view role) const {
    for (const auto& u : units)
      if (u.role == role) return u;
    throw std::out_of_range("bundle has no unit '" + std::string(role) + "'");
  }
  ModelUnit& unit(std::string_view role) {
    for (auto& u : units)
      if (u.role == role) return u;
    throw std::out_of_range("bundle has no unit '" + std::string(role) + "'");
  }
};

// Concatenates the auxiliary coarse logits onto a representation.
inline std::vector<double> aux_fuse(std::span<const double> rep,
                                    std::span<const double> coarse_logits) {
  if (coarse_logits.size() != 1)
    throw ShapeError("auxiliary fusion expects exactly one coarse logit, got " +
                     std::to_string(coarse_logits.size()));
  std::vector<double> out(rep.begin(), rep.end());
  out.insert(out.end(), coarse_logits.begin(), coarse_logits.end());
  return out;
}

// Throws ShapeError unless the bundle has the unit/head layout its strategy
// requires.
inline void check_bundle_shapes(const TrainedBundle& b) {
  auto fail = [&](const std::string& why) {
    throw ShapeError(std::string(strategy_name(b.strategy)) + " bundle: " + why);
  };
  for (const auto& u : b.units) {
    if (!u.encoder) fail("unit '" + u.role + "' has no encoder");
    const std::size_t want = u.encoder->width() + (u.fuses_auxiliary ? 1 : 0);
    for (const auto& h : u.heads)
      if (h.head.input_width() != want)
        fail("head '" + h.task + "' input width " + std::to_string(h.head.input_width()) +
             " != " + std::to_string(want));
  }
  switch (b.strategy) {
    case Strategy::kMlc:
      if (b.units.size() != 1 || b.units[0].heads.size() != 1 ||
          b.units[0].heads[0].head.outputs() != kMlcOutputs)
        fail("expected one unit with a single k=5 head");
      break;
    case Strategy::kMtl:
      if (b.units.size() != 1 || b.units[0].heads.size() != 5) fail("expected one encoder with 5 heads");
      for (const auto& h : b.units[0].heads)
        if (h.head.outputs() != 1) fail("MTL heads must have k=1");
      break;
    case Strategy::kBc:
    case Strategy::kAux:
      if (b.units.size() != 5) fail("expected 5 units");
      for (const auto& u : b.units) {
        if (u.heads.size() != 1 || u.heads[0].head.outputs() != 1)
          fail("unit '" + u.role + "' must have one k=1 head");
        const bool fine = u.role != "coarse";
        if (u.fuses_auxiliary != (b.strategy == Strategy::kAux && fine))
          fail("unit '" + u.role + "' has the wrong fusion flag");
      }
      break;
  }
}

// Hooks for instrumenting training runs.
struct BatchEvent {
  std::string_view stage;
  bool fine_stage = false;
  std::span<const std::string> ids;
  std::span<const LabelSet> labels;
};

struct TrainingObserver {
  std::function<void(const BatchEvent&)> on_batch;
  std::function<void(std::string_view stage, const ModelUnit&)> on_stage_end;
  std::function<void(const HistoryEntry&)> on_epoch;
  std::function<void(const std::string&)> log;
};

namespace detail {

struct Example {
  std::string id;
  TokenSequence tokens;
  LabelSet labels;
  double aux_logit = 0.0;
};

inline std::vector<Example> make_examples(const Corpus& corpus, const Encoder& tokenizer) {
  std::vector<Example> out;
  out.reserve(corpus.size());
  for (const auto& post : corpus)
    out.push_back({post.id, tokenizer.tokenize(clean_text(post.text)), require_labels(post), 0.0});
  return out;
}

enum class Objective { kMultiLabel, kMultiTask, kBinary };

struct Stage {
  std::string name;
  Objective objective = Objective::kBinary;
  std::optional<Dimension> dimension;  // binary fine stages; nullopt = coarse
  bool fine = false;                   // trained on gold-hostile posts only
};

inline double binary_target(const Stage& stage, const LabelSet& l) {
  return stage.dimension ? double(l.get(*stage.dimension)) : double(l.hostile);
}

inline std::vector<double> head_input(const ModelUnit& unit, std::span<const double> rep,
                                      double aux_logit) {
  if (!unit.fuses_auxiliary) return {rep.begin(), rep.end()};
  const double logit[1] = {aux_logit};
  return aux_fuse(rep, logit);
}

// Eval-mode logits for every head of a unit, in head order.
inline std::vector<std::vector<double>> unit_logits(const ModelUnit& unit,
                                                    const TokenSequence& tokens,
                                                    double aux_logit) {
  const EncoderOutput out = unit.encoder->encode(tokens);
  const auto input = head_input(unit, out.first_token_rep(), aux_logit);
  std::vector<std::vector<double>> logits;
  for (const auto& h : unit.heads) logits.push_back(head_forward(input, h.head, Mode::kEval));
  return logits;
}

struct ExampleLoss {
  double loss = 0.0;
  std::vector<std::vector<double>> dlogits;  // per head
};

inline ExampleLoss objective_loss(const Stage& stage,
                                  const std::vector<std::vector<double>>& logits,
                                  const LabelSet& labels, double lambda_fine) {
  ExampleLoss r;
  switch (stage.objective) {
    case Objective::kMultiLabel: {
      const auto t = mlc_targets(labels);
      r.loss = mlc_loss(logits[0], t);
      r.dlogits.push_back(mlc_loss_grad(logits[0], t));
      break;
    }
    case Objective::kMultiTask: {
      // heads: coarse, then kMtlFineOrder
      std::array<double, 4> fine{};
      for (std::size_t n = 0; n < 4; ++n) fine[n] = logits[n + 1][0];
      const MtlLoss m = mtl_loss_grad(logits[0][0], fine, labels, lambda_fine);
      r.loss = m.loss;
      r.dlogits.push_back({m.d_coarse});
      for (std::size_t n = 0; n < 4; ++n) r.dlogits.push_back({m.d_fine[n]});
      break;
    }
    case Objective::kBinary: {
      const double y = binary_target(stage, labels);
      r.loss = bce(logits[0][0], y);
      r.dlogits.push_back({bce_grad(logits[0][0], y)});
      break;
    }
  }
  return r;
}

struct StageScore {
  double loss = 0.0;
  double f1 = 0.0;
};

// Eval-mode loss and weighted F1 of a stage's own task(s). Joint objectives
// score the mean of the coarse weighted F1 and the weighted fine-grained F1
// on gold-hostile posts.
inline StageScore score_stage(const Stage& stage, const ModelUnit& unit,
                              const std::vector<Example>& data, double threshold,
                              double lambda_fine) {
  StageScore s;
  if (data.empty()) return s;
  std::vector<int> coarse_pred, coarse_gold;
  PerDimension<std::vector<int>> fine_pred, fine_gold;
  for (const auto& ex : data) {
    const auto logits = unit_logits(unit, ex.tokens, ex.aux_logit);
    s.loss += objective_loss(stage, logits, ex.labels, lambda_fine).loss;
    if (stage.objective == Objective::kBinary) {
      coarse_pred.push_back(sigmoid(logits[0][0]) >= threshold);
      coarse_gold.push_back(binary_target(stage, ex.labels) > 0.5);
      continue;
    }
    double coarse_logit = 0.0;
    PerDimension<double> fine{};
    if (stage.objective == Objective::kMultiLabel) {
      coarse_logit = logits[0][0];
      for (Dimension d : kDimensions) fine[index(d)] = logits[0][mlc_slot(d)];
    } else {
      coarse_logit = logits[0][0];
      for (std::size_t n = 0; n < 4; ++n) fine[index(kMtlFineOrder[n])] = logits[n + 1][0];
    }
    coarse_pred.push_back(sigmoid(coarse_logit) >= threshold);
    coarse_gold.push_back(ex.labels.hostile);
    if (!ex.labels.hostile) continue;
    for (Dimension d : kDimensions) {
      fine_pred[index(d)].push_back(sigmoid(fine[index(d)]) >= threshold);
      fine_gold[index(d)].push_back(ex.labels.get(d));
    }
  }
  s.loss /= static_cast<double>(data.size());
  s.f1 = weighted_f1(coarse_pred, coarse_gold);
  if (stage.objective != Objective::kBinary && !fine_gold[0].empty()) {
    PerDimension<double> f1s{}, supports{};
    for (Dimension d : kDimensions) {
      const auto i = index(d);
      f1s[i] = weighted_f1(fine_pred[i], fine_gold[i]);
      supports[i] = static_cast<double>(std::count(fine_gold[i].begin(), fine_gold[i].end(), 1));
    }
    double total = 0;
    for (double v : supports) total += v;
    if (total > 0) s.f1 = 0.5 * (s.f1 + weighted_fine_grained(f1s, supports));
  }
  return s;
}

// Mini-batch Adam training of one unit with best-validation checkpointing
// and early stopping.
inline void train_stage(ModelUnit& unit, const Stage& stage,
                        const std::vector<Example>& train, const std::vector<Example>& validation,
                        const StrategyConfig& config, std::uint64_t stage_seed,
                        std::vector<HistoryEntry>& history, const TrainingObserver& observer) {
  if (train.empty())
    throw TrainingError("stage '" + stage.name + "' has no training examples");

  Rng shuffle_rng(derive_seed(stage_seed, 1));
  Rng dropout_rng(derive_seed(stage_seed, 2));
  const Adam adam{config.learning_rate};
  const bool update_encoder = config.fine_tune_encoder;
  AdamState encoder_state(unit.encoder->parameters());
  std::vector<AdamState> head_states;
  for (const auto& h : unit.heads) head_states.emplace_back(h.head.parameters());

  ParameterSet encoder_grads = unit.encoder->parameters().zeros_like();
  std::vector<ParameterSet> head_grads;
  for (const auto& h : unit.heads) head_grads.push_back(h.head.parameters().zeros_like());

  const std::size_t width = unit.encoder->width();
  std::vector<std::size_t> order(train.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

  ModelUnit best = unit;
  double best_score = -std::numeric_limits<double>::infinity();
  std::size_t since_best = 0;

  for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
    shuffle_rng.shuffle(order);
    double epoch_loss = 0.0;
    for (std::size_t start = 0, batch_no = 0; start < order.size();
         start += config.batch_size, ++batch_no) {
      const std::size_t end = std::min(order.size(), start + config.batch_size);
      std::vector<std::string> ids;
      std::vector<LabelSet> labels;
      for (std::size_t b = start; b < end; ++b) {
        const Example& ex = train[order[b]];
        if (stage.fine && !ex.labels.hostile)
          throw std::logic_error("fine stage '" + stage.name +
                                 "' received non-hostile post '" + ex.id + "'");
        ids.push_back(ex.id);
        labels.push_back(ex.labels);
      }
      if (observer.on_batch) observer.on_batch({stage.name, stage.fine, ids, labels});

      encoder_grads.fill(0.0);
      for (auto& g : head_grads) g.fill(0.0);
      double batch_loss = 0.0;
      for (std::size_t b = start; b < end; ++b) {
        const Example& ex = train[order[b]];
        std::unique_ptr<EncoderTape> tape;
        const EncoderOutput out = unit.encoder->forward(ex.tokens, &tape);
        const auto input = head_input(unit, out.first_token_rep(), ex.aux_logit);
        std::vector<std::vector<double>> logits, masks(unit.heads.size());
        for (std::size_t h = 0; h < unit.heads.size(); ++h)
          logits.push_back(head_forward(input, unit.heads[h].head, Mode::kTrain,
                                        &dropout_rng, &masks[h]));
        const ExampleLoss el =
            objective_loss(stage, logits, ex.labels, config.lambda_fine);
        batch_loss += el.loss;
        std::vector<double> dy(out.length * width, 0.0);
        for (std::size_t h = 0; h < unit.heads.size(); ++h) {
          const auto dinput = head_backward(unit.heads[h].head, input, masks[h],
                                            el.dlogits[h], head_grads[h]);
          for (std::size_t c = 0; c < width; ++c) dy[c] += dinput[c];
        }
        if (update_encoder) unit.encoder->backward(*tape, dy, encoder_grads);
      }
      const double n = static_cast<double>(end - start);
      batch_loss /= n;
      if (!std::isfinite(batch_loss))
        throw TrainingError("non-finite loss in stage '" + stage.name + "' epoch " +
                            std::to_string(epoch) + " batch " + std::to_string(batch_no));
      epoch_loss += batch_loss * n;
      if (update_encoder) {
        encoder_grads.scale(1.0 / n);
        adam.update(unit.encoder->parameters(), encoder_grads, encoder_state);
      }
      for (std::size_t h = 0; h < unit.heads.size(); ++h) {
        head_grads[h].scale(1.0 / n);
        adam.update(unit.heads[h].head.parameters(), head_grads[h], head_states[h]);
      }
    }

    const StageScore train_score =
        score_stage(stage, unit, train, config.threshold, config.lambda_fine);
    HistoryEntry tr{epoch, "train", stage.name,
                    epoch_loss / static_cast<double>(train.size()), train_score.f1};
    history.push_back(tr);
    if (observer.on_epoch) observer.on_epoch(tr);
    double score = train_score.f1;
    if (!validation.empty()) {
      const StageScore val =
          score_stage(stage, unit, validation, config.threshold, config.lambda_fine);
      HistoryEntry ve{epoch, "validation", stage.name, val.loss, val.f1};
      history.push_back(ve);
      if (observer.on_epoch) observer.on_epoch(ve);
      score = val.f1;
    }
    if (observer.log)
      observer.log(stage.name + " epoch " + std::to_string(epoch) + " loss " +
                   std::to_string(tr.loss) + " score " + std::to_string(score));
    if (score > best_score) {
      best_score = score;
      best = unit;
      since_best = 0;
    } else if (++since_best >= config.patience) {
      break;
    }
  }
  unit = std::move(best);
  if (observer.on_stage_end) observer.on_stage_end(stage.name, unit);
}

inline std::uint64_t role_stream(std::string_view role) { return fnv1a64(role); }

inline ModelUnit make_unit(const StrategyConfig& config, std::string role,
                           std::vector<std::pair<std::string, std::size_t>> heads,
                           bool fuses_auxiliary) {
  ModelUnit unit;
  unit.role = std::move(role);
  EncoderSpec spec = config.encoder;
  spec.seed = derive_seed(config.seed ^ config.encoder.seed, role_stream(unit.role));
  unit.encoder = make_encoder(spec);
  unit.fuses_auxiliary = fuses_auxiliary;
  const std::size_t input = unit.encoder->width() + (fuses_auxiliary ? 1 : 0);
  Rng rng(derive_seed(spec.seed, 0x4ead));
  for (auto& [task, k] : heads) {
    ClassifierHead head(input, k, config.dropout);
    head.initialize(rng, 1.0 / std::sqrt(static_cast<double>(input)));
    unit.heads.push_back({task, std::move(head)});
  }
  return unit;
}

inline std::vector<Example> fine_examples(const std::vector<Example>& all) {
  std::vector<Example> out;
  for (const auto& ex : all)
    if (ex.labels.hostile) out.push_back(ex);
  return out;
}

}  // namespace detail

// Builds a freshly initialized bundle with the unit/head layout of the
// configured strategy.
inline TrainedBundle initial_bundle(const StrategyConfig& config) {
  using detail::make_unit;
  TrainedBundle b;
  b.strategy = config.strategy;
  b.config = config;
  switch (config.strategy) {
    case Strategy::kMlc:
      b.units.push_back(make_unit(config, "joint", {{"joint", kMlcOutputs}}, false));
      break;
    case Strategy::kMtl: {
      std::vector<std::pair<std::string, std::size_t>> heads = {{"coarse", 1}};
      for (Dimension d : kMtlFineOrder) heads.emplace_back(std::string(dimension_name(d)), 1);
      b.units.push_back(make_unit(config, "joint", heads, false));
      break;
    }
    case Strategy::kBc:
    case Strategy::kAux:
      b.units.push_back(make_unit(config, "coarse", {{"coarse", 1}}, false));
      for (Dimension d : kDimensions) {
        const std::string name(dimension_name(d));
        b.units.push_back(
            make_unit(config, name, {{name, 1}}, config.strategy == Strategy::kAux));
      }
      break;
  }
  check_bundle_shapes(b);
  return b;
}

// Trains the configured strategy. Fine-grained units of BC and AUX only see
// gold-hostile posts; AUX trains the coarse unit first and feeds its frozen
// logit into every fine head.
inline TrainedBundle train(const StrategyConfig& config, const SplitBundle& splits,
                           const TrainingObserver& observer = {}) {
  using namespace detail;
  config.validate();
  TrainedBundle bundle = initial_bundle(config);
  const Encoder& tokenizer = *bundle.units.front().encoder;
  const auto train_all = make_examples(splits.train, tokenizer);
  const auto val_all = make_examples(splits.validation, tokenizer);
  if (train_all.empty()) throw TrainingError("training split is empty");

  auto stage_seed = [&](std::string_view name) {
    return derive_seed(config.seed, role_stream(name) ^ 0x57a6e);
  };

  switch (config.strategy) {
    case Strategy::kMlc: {
      const Stage stage{"joint", Objective::kMultiLabel, std::nullopt, false};
      train_stage(bundle.unit("joint"), stage, train_all, val_all, config,
                  stage_seed(stage.name), bundle.history, observer);
      break;
    }
    case Strategy::kMtl: {
      const Stage stage{"joint", Objective::kMultiTask, std::nullopt, false};
      train_stage(bundle.unit("joint"), stage, train_all, val_all, config,
                  stage_seed(stage.name), bundle.history, observer);
      break;
    }
    case Strategy::kBc:
    case Strategy::kAux: {
      const Stage coarse{"coarse", Objective::kBinary, std::nullopt, false};
      train_stage(bundle.unit("coarse"), coarse, train_all, val_all, config,
                  stage_seed(coarse.name), bundle.history, observer);

      auto train_fine = fine_examples(train_all);
      auto val_fine = fine_examples(val_all);
      if (train_fine.empty())
        throw TrainingError("training split has no hostile posts for the fine-grained stages");
      if (config.strategy == Strategy::kAux) {
        const ModelUnit& aux = bundle.unit("coarse");
        for (auto* set : {&train_fine, &val_fine})
          for (auto& ex : *set) ex.aux_logit = unit_logits(aux, ex.tokens, 0.0)[0][0];
      }
      for (Dimension d : kDimensions) {
        const Stage stage{std::string(dimension_name(d)), Objective::kBinary, d, true};
        train_stage(bundle.unit(stage.name), stage, train_fine, val_fine, config,
                    stage_seed(stage.name), bundle.history, observer);
      }
      break;
    }
  }
  check_bundle_shapes(bundle);
  return bundle;
}

// Scores a single cleaned post with every unit of the bundle.
inline PostPrediction predict_post(const TrainedBundle& bundle, const std::string& id,
                                   const CleanText& text, double threshold) {
  using detail::unit_logits;
  PostPrediction p;
  p.id = id;
  const TokenSequence tokens = bundle.units.front().encoder->tokenize(text);
  switch (bundle.strategy) {
    case Strategy::kMlc: {
      const auto logits = unit_logits(bundle.unit("joint"), tokens, 0.0)[0];
      p.coarse_probability = sigmoid(logits[0]);
      for (Dimension d : kDimensions)
        p.fine_probabilities[index(d)] = sigmoid(logits[mlc_slot(d)]);
      break;
    }
    case Strategy::kMtl: {
      const auto logits = unit_logits(bundle.unit("joint"), tokens, 0.0);
      p.coarse_probability = sigmoid(logits[0][0]);
      for (std::size_t n = 0; n < 4; ++n)
        p.fine_probabilities[index(kMtlFineOrder[n])] = sigmoid(logits[n + 1][0]);
      break;
    }
    case Strategy::kBc:
    case Strategy::kAux: {
      const double coarse = unit_logits(bundle.unit("coarse"), tokens, 0.0)[0][0];
      p.coarse_probability = sigmoid(coarse);
      for (Dimension d : kDimensions) {
        const auto& unit = bundle.unit(dimension_name(d));
        p.fine_probabilities[index(d)] = sigmoid(unit_logits(unit, tokens, coarse)[0][0]);
      }
      break;
    }
  }
  p.labels = threshold_labels(p.coarse_probability, p.fine_probabilities, threshold);
  return p;
}

inline PredictionSet predict(const TrainedBundle& bundle, const Corpus& posts,
                             double threshold) {
  if (!(threshold > 0 && threshold < 1)) throw std::invalid_argument("threshold must be in (0, 1)");
  PredictionSet out;
  out.threshold = threshold;
  out.posts.reserve(posts.size());
  for (const auto& post : posts)
    out.posts.push_back(predict_post(bundle, post.id, clean_text(post.text), threshold));
  return out;
}

inline PredictionSet predict(const TrainedBundle& bundle, const Corpus& posts) {
  return predict(bundle, posts, bundle.config.threshold);
}

}  // namespace hostility
