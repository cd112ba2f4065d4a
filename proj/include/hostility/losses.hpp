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

#include <array>
#include <cmath>
#include <span>
#include <vector>

#include "hostility/common.hpp"
#include "hostility/labels.hpp"

namespace hostility {

inline double sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

// Binary cross-entropy on a logit, -[y log s(x) + (1-y) log(1-s(x))], in the
// overflow-free form max(x,0) - x*y + log(1 + exp(-|x|)).
inline double bce(double logit, double target) {
  return std::max(logit, 0.0) - logit * target +
         std::log1p(std::exp(-std::abs(logit)));
}

// d bce / d logit.
inline double bce_grad(double logit, double target) {
  return sigmoid(logit) - target;
}

// Joint multi-label head order.
inline constexpr std::size_t kMlcOutputs = 5;
enum class MlcSlot { kHostile = 0, kFake, kHate, kDefamation, kOffensive };

inline std::array<double, kMlcOutputs> mlc_targets(const LabelSet& l) {
  return {double(l.hostile), double(l.fake), double(l.hate),
          double(l.defamation), double(l.offensive)};
}

inline std::size_t mlc_slot(Dimension d) {
  switch (d) {
    case Dimension::kFake: return 1;
    case Dimension::kHate: return 2;
    case Dimension::kDefamation: return 3;
    case Dimension::kOffensive: return 4;
  }
  return 0;
}

// Per-example loss: sum of the five binary cross-entropies.
inline double mlc_loss(std::span<const double> logits,
                       std::span<const double> targets) {
  if (logits.size() != kMlcOutputs || targets.size() != kMlcOutputs)
    throw ShapeError("mlc_loss expects 5 logits and 5 targets");
  double loss = 0.0;
  for (std::size_t j = 0; j < kMlcOutputs; ++j) loss += bce(logits[j], targets[j]);
  return loss;
}

inline std::vector<double> mlc_loss_grad(std::span<const double> logits,
                                         std::span<const double> targets) {
  if (logits.size() != kMlcOutputs || targets.size() != kMlcOutputs)
    throw ShapeError("mlc_loss expects 5 logits and 5 targets");
  std::vector<double> g(kMlcOutputs);
  for (std::size_t j = 0; j < kMlcOutputs; ++j) g[j] = bce_grad(logits[j], targets[j]);
  return g;
}

// Mean over examples of mlc_loss.
inline double mlc_batch_loss(std::span<const std::vector<double>> logits,
                             std::span<const std::vector<double>> targets) {
  if (logits.size() != targets.size() || logits.empty())
    throw ShapeError("mlc_batch_loss: batch size mismatch or empty batch");
  double sum = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i)
    sum += mlc_loss(logits[i], targets[i]);
  return sum / static_cast<double>(logits.size());
}

// Fine-task head order of the multi-task model.
inline constexpr std::array<Dimension, 4> kMtlFineOrder = {
    Dimension::kHate, Dimension::kDefamation, Dimension::kFake,
    Dimension::kOffensive};

struct MtlLoss {
  double loss = 0.0;
  double d_coarse = 0.0;
  std::array<double, 4> d_fine{};  // kMtlFineOrder
};

// L = bce(coarse, hostile) + lambda * (1/4) * sum_n bce(fine_n, y_n), with
// lambda replaced by 0 for non-hostile posts. Per-task weights are 1.
inline MtlLoss mtl_loss_grad(double coarse_logit, std::span<const double> fine_logits,
                             const LabelSet& labels, double lambda_fine) {
  if (fine_logits.size() != 4) throw ShapeError("mtl_loss expects 4 fine logits");
  MtlLoss r;
  const double y = labels.hostile ? 1.0 : 0.0;
  r.loss = bce(coarse_logit, y);
  r.d_coarse = bce_grad(coarse_logit, y);
  if (!labels.hostile || lambda_fine == 0.0) return r;  // fine grads stay 0
  const double w = lambda_fine / 4.0;
  for (std::size_t n = 0; n < 4; ++n) {
    const double t = labels.get(kMtlFineOrder[n]) ? 1.0 : 0.0;
    r.loss += w * bce(fine_logits[n], t);
    r.d_fine[n] = w * bce_grad(fine_logits[n], t);
  }
  return r;
}

inline double mtl_loss(double coarse_logit, std::span<const double> fine_logits,
                       const LabelSet& labels, double lambda_fine) {
  return mtl_loss_grad(coarse_logit, fine_logits, labels, lambda_fine).loss;
}

}  // namespace hostility
