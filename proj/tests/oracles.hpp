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

// Independent reference implementations used only by the test suites. They
// deliberately avoid the library's code paths: naive formulas, brute-force
// counting, high-precision arithmetic and finite differences.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_dec_float.hpp>

#include "hostility/hostility.hpp"

namespace oracle {

using HighPrecision = boost::multiprecision::cpp_dec_float_50;

// -[y log s(x) + (1-y) log(1-s(x))] evaluated naively in 50 digits.
inline HighPrecision bce(double logit, int y) {
  const HighPrecision x(logit);
  const HighPrecision s = HighPrecision(1) / (HighPrecision(1) + boost::multiprecision::exp(-x));
  return -(HighPrecision(y) * boost::multiprecision::log(s) +
           HighPrecision(1 - y) * boost::multiprecision::log(HighPrecision(1) - s));
}

// Mean over examples of the summed per-class BCE.
inline double mlc_batch(const std::vector<std::vector<double>>& logits,
                        const std::vector<std::vector<int>>& labels) {
  HighPrecision total(0);
  for (std::size_t i = 0; i < logits.size(); ++i)
    for (std::size_t j = 0; j < logits[i].size(); ++j) total += bce(logits[i][j], labels[i][j]);
  return static_cast<double>(total / HighPrecision(logits.size()));
}

// Coarse BCE plus lambda/4 times the fine BCE sum, lambda gated on hostility.
inline double mtl(double coarse, const std::vector<double>& fine, const std::vector<int>& fine_y,
                  bool hostile, double lambda) {
  HighPrecision total = bce(coarse, hostile ? 1 : 0);
  if (!hostile) return static_cast<double>(total);
  HighPrecision fine_sum(0);
  for (std::size_t n = 0; n < fine.size(); ++n) fine_sum += bce(fine[n], fine_y[n]);
  total += HighPrecision(lambda) * fine_sum / HighPrecision(4);
  return static_cast<double>(total);
}

// Two-class support-weighted F1 by explicit enumeration of both classes.
inline double weighted_f1(const std::vector<int>& pred, const std::vector<int>& gold) {
  double result = 0.0;
  for (int cls = 0; cls <= 1; ++cls) {
    int tp = 0, predicted = 0, actual = 0;
    for (std::size_t i = 0; i < gold.size(); ++i) {
      if (pred[i] == cls) ++predicted;
      if (gold[i] == cls) ++actual;
      if (pred[i] == cls && gold[i] == cls) ++tp;
    }
    const double precision = predicted ? double(tp) / predicted : 0.0;
    const double recall = actual ? double(tp) / actual : 0.0;
    const double f1 = (precision + recall) > 0 ? 2 * precision * recall / (precision + recall) : 0.0;
    result += f1 * actual / static_cast<double>(gold.size());
  }
  return result;
}

// sum(w_i * f1_i) / sum(w_i), written out term by term.
inline double weighted_sum(const std::vector<double>& f1, const std::vector<double>& w) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < f1.size(); ++i) {
    num += f1[i] * w[i];
    den += w[i];
  }
  return num / den;
}

// Central finite difference of f with respect to *x.
inline double central_difference(const std::function<double()>& f, double* x, double h = 1e-4) {
  const double saved = *x;
  *x = saved + h;
  const double up = f();
  *x = saved - h;
  const double down = f();
  *x = saved;
  return (up - down) / (2 * h);
}

inline double relative_error(double a, double b) {
  const double scale = std::max({std::abs(a), std::abs(b), 1e-6});
  return std::abs(a - b) / scale;
}

// Random labeled corpus with roughly the marginals of the hostility task.
inline hostility::Corpus random_corpus(std::size_t n, std::uint64_t seed) {
  hostility::Rng rng(seed);
  hostility::Corpus corpus;
  for (std::size_t i = 0; i < n; ++i) {
    hostility::LabelSet l;
    if (rng.uniform() < 0.47) {
      while (!l.any_fine())
        l = hostility::LabelSet::from_fine(rng.uniform() < 0.43, rng.uniform() < 0.30,
                                           rng.uniform() < 0.28, rng.uniform() < 0.21);
    }
    corpus.push_back({"p" + std::to_string(i), "text " + std::to_string(i), l});
  }
  return corpus;
}

// Corpus with exactly the label counts of the shared-task dataset: 8192
// posts, 4358 non-hostile, fake 1638, hate 1132, offensive 1071,
// defamation 810 spread over 3834 hostile posts.
inline hostility::Corpus constraint_shaped_corpus() {
  hostility::Corpus corpus;
  const std::size_t hostile = 3834;
  // Deal the 4651 fine tags round-robin across hostile posts so that every
  // hostile post gets at least one tag and no post gets the same tag twice.
  std::vector<hostility::LabelSet> labels(hostile);
  std::size_t cursor = 0;
  const std::pair<hostility::Dimension, std::size_t> tags[] = {
      {hostility::Dimension::kFake, 1638},
      {hostility::Dimension::kHate, 1132},
      {hostility::Dimension::kOffensive, 1071},
      {hostility::Dimension::kDefamation, 810}};
  for (const auto& [dim, count] : tags)
    for (std::size_t k = 0; k < count; ++k) {
      labels[cursor % hostile].set(dim, true);
      ++cursor;
    }
  std::size_t id = 0;
  for (std::size_t i = 0; i < 4358; ++i)
    corpus.push_back({"n" + std::to_string(id++), "सामान्य पोस्ट", hostility::LabelSet{}});
  for (auto& l : labels) {
    l.hostile = true;
    corpus.push_back({"h" + std::to_string(id++), "शत्रुतापूर्ण पोस्ट", l});
  }
  return corpus;
}

// Positive-rate deviation bound for one split.
inline bool split_rates_ok(const hostility::Corpus& corpus, const hostility::Corpus& split,
                           std::string* why = nullptr) {
  if (split.empty()) return true;
  const auto whole = hostility::label_stats(corpus);
  const auto part = hostility::label_stats(split);
  const double bound = std::max(0.02, 2.0 / static_cast<double>(split.size()));
  const std::size_t w[5] = {whole.hostile, whole.fake, whole.hate, whole.offensive, whole.defamation};
  const std::size_t p[5] = {part.hostile, part.fake, part.hate, part.offensive, part.defamation};
  for (int d = 0; d < 5; ++d) {
    const double dev = std::abs(double(p[d]) / split.size() - double(w[d]) / corpus.size());
    if (dev > bound) {
      if (why)
        *why = "dimension " + std::to_string(d) + " deviates by " + std::to_string(dev) +
               " (bound " + std::to_string(bound) + ", split size " +
               std::to_string(split.size()) + ")";
      return false;
    }
  }
  return true;
}

}  // namespace oracle

namespace oracle {

// Relative agreement with an absolute floor for gradients that are
// numerically zero (finite differences cannot resolve below ~1e-9 there).
inline bool gradients_agree(double analytic, double numeric, double rel_tol = 1e-3) {
  const double diff = std::abs(analytic - numeric);
  return diff <= rel_tol * std::max(std::abs(analytic), std::abs(numeric)) || diff < 1e-8;
}

struct GradCheckResult {
  std::size_t checked = 0;
  std::size_t failed = 0;
  double worst = 0.0;
  std::string first_failure;
};

// BCE of a head over the encoder's first-token representation (eval mode),
// compared against central differences on a sample of entries from every
// encoder and head tensor.
inline GradCheckResult check_encoder_head_gradients(std::uint64_t seed) {
  using namespace hostility;
  Rng rng(seed);
  EncoderSpec spec;
  spec.seed = seed;
  spec.max_length = 24;
  TinyEncoder encoder(spec);
  ClassifierHead head(spec.width, 1, 0.3);
  head.initialize(rng, 0.3);
  TokenSequence tokens;
  tokens.token_ids.push_back(0);
  const std::size_t len = 2 + rng.below(10);
  for (std::size_t i = 1; i < len; ++i)
    tokens.token_ids.push_back(static_cast<std::uint32_t>(1 + rng.below(spec.buckets - 1)));
  const double y = rng.below(2) ? 1.0 : 0.0;

  auto loss = [&] {
    const auto out = encoder.encode(tokens);
    return hostility::bce(head_forward(out.first_token_rep(), head, Mode::kEval)[0], y);
  };

  std::unique_ptr<EncoderTape> tape;
  const auto out = encoder.forward(tokens, &tape);
  const auto logits = head_forward(out.first_token_rep(), head, Mode::kEval);
  ParameterSet head_grads = head.parameters().zeros_like();
  const double dlogit[1] = {hostility::bce_grad(logits[0], y)};
  const auto drep = head_backward(head, out.first_token_rep(), {}, dlogit, head_grads);
  std::vector<double> dy(out.length * out.width, 0.0);
  std::copy(drep.begin(), drep.end(), dy.begin());
  ParameterSet enc_grads = encoder.parameters().zeros_like();
  encoder.backward(*tape, dy, enc_grads);

  GradCheckResult r;
  auto check = [&](ParameterSet& params, const ParameterSet& grads, const std::string& prefix) {
    for (std::size_t t = 0; t < params.tensors().size(); ++t) {
      auto& tensor = params.tensors()[t];
      std::vector<std::size_t> entries;
      if (tensor.name == "embedding") {
        for (auto id : tokens.token_ids)
          for (int k = 0; k < 3; ++k) entries.push_back(id * tensor.cols() + rng.below(tensor.cols()));
      } else if (tensor.name == "position") {
        for (std::size_t i = 0; i < len; ++i) entries.push_back(i * tensor.cols() + rng.below(tensor.cols()));
      } else {
        for (int k = 0; k < 8; ++k) entries.push_back(rng.below(tensor.size()));
      }
      for (std::size_t e : entries) {
        const double analytic = grads.tensors()[t].values[e];
        const double numeric = central_difference(loss, &tensor.values[e]);
        ++r.checked;
        const double rel = relative_error(analytic, numeric);
        if (!gradients_agree(analytic, numeric)) {
          ++r.failed;
          if (r.first_failure.empty())
            r.first_failure = prefix + tensor.name + "[" + std::to_string(e) +
                              "] analytic " + std::to_string(analytic) + " numeric " +
                              std::to_string(numeric);
        }
        if (std::max(std::abs(analytic), std::abs(numeric)) > 1e-6) r.worst = std::max(r.worst, rel);
      }
    }
  };
  check(encoder.parameters(), enc_grads, "encoder.");
  check(head.parameters(), head_grads, "head.");
  return r;
}

}  // namespace oracle

namespace oracle {

struct LossCheck {
  double worst_relative = 0.0;
  bool nonhostile_fine_grads_zero = true;
};

// One random batch (size 1 to 8, logits spread up to +-30) through both
// objectives, compared against the high-precision definitions.
inline LossCheck check_loss_batch(std::uint64_t seed) {
  hostility::Rng rng(seed);
  LossCheck r;
  const std::size_t batch = 1 + rng.below(8);
  const double spread = rng.below(2) ? 3.0 : 10.0;
  std::vector<std::vector<double>> logits(batch), targets(batch);
  std::vector<std::vector<int>> int_targets(batch);
  for (std::size_t i = 0; i < batch; ++i) {
    for (std::size_t j = 0; j < 5; ++j) {
      logits[i].push_back(std::clamp(spread * rng.normal(), -30.0, 30.0));
      const int y = static_cast<int>(rng.below(2));
      targets[i].push_back(y);
      int_targets[i].push_back(y);
    }
  }
  const double got = hostility::mlc_batch_loss(logits, targets);
  r.worst_relative = std::max(r.worst_relative, relative_error(got, mlc_batch(logits, int_targets)));

  const double lambda = rng.uniform();
  for (std::size_t i = 0; i < batch; ++i) {
    hostility::LabelSet labels;
    labels.hostile = int_targets[i][0] == 1;
    std::vector<int> fine_y(4, 0);
    if (labels.hostile) {
      for (std::size_t n = 0; n < 4; ++n) {
        fine_y[n] = int_targets[i][n + 1];
        labels.set(hostility::kMtlFineOrder[n], fine_y[n] == 1);
      }
    }
    const std::vector<double> fine(logits[i].begin() + 1, logits[i].end());
    const auto m = hostility::mtl_loss_grad(logits[i][0], fine, labels, lambda);
    r.worst_relative = std::max(
        r.worst_relative, relative_error(m.loss, mtl(logits[i][0], fine, fine_y, labels.hostile, lambda)));
    if (!labels.hostile)
      for (double g : m.d_fine)
        if (g != 0.0) r.nonhostile_fine_grads_zero = false;
  }
  return r;
}

}  // namespace oracle
