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

#include <span>
#include <string>
#include <vector>

#include "hostility/common.hpp"
#include "hostility/tensor.hpp"

namespace hostility {

enum class Mode { kTrain, kEval };

// Dropout followed by one fully connected layer.
// weight is (outputs x input_width), logits = weight * input + bias.
class ClassifierHead {
 public:
  ClassifierHead() = default;
  ClassifierHead(std::size_t input_width, std::size_t outputs,
                 double dropout_rate = 0.3)
      : input_width_(input_width), outputs_(outputs), dropout_rate_(dropout_rate) {
    if (outputs == 0) throw ShapeError("classifier head needs k >= 1");
    if (input_width == 0) throw ShapeError("classifier head needs input width >= 1");
    if (dropout_rate < 0.0 || dropout_rate >= 1.0)
      throw std::invalid_argument("dropout rate must be in [0, 1)");
    params_.add("weight", {outputs, input_width});
    params_.add("bias", {outputs});
  }

  void initialize(Rng& rng, double stddev = 0.02) {
    for (auto& v : params_.at("weight").values) v = stddev * rng.normal();
    for (auto& v : params_.at("bias").values) v = 0.0;
  }

  std::size_t input_width() const { return input_width_; }
  std::size_t outputs() const { return outputs_; }
  double dropout_rate() const { return dropout_rate_; }

  ParameterSet& parameters() { return params_; }
  const ParameterSet& parameters() const { return params_; }

 private:
  std::size_t input_width_ = 0;
  std::size_t outputs_ = 0;
  double dropout_rate_ = 0.3;
  ParameterSet params_;
};

// Forward pass. In train mode an inverted-dropout mask (entries 0 or
// 1/(1-p)) is drawn from `rng`, applied to the input and written to `mask`
// for the backward pass. In eval mode the input is used as is.
inline std::vector<double> head_forward(std::span<const double> input,
                                        const ClassifierHead& head, Mode mode,
                                        Rng* rng = nullptr,
                                        std::vector<double>* mask = nullptr) {
  if (input.size() != head.input_width())
    throw ShapeError("head input width " + std::to_string(input.size()) +
                     " != expected " + std::to_string(head.input_width()));
  const Tensor& w = head.parameters().at("weight");
  const Tensor& b = head.parameters().at("bias");
  std::vector<double> x(input.begin(), input.end());
  if (mode == Mode::kTrain && head.dropout_rate() > 0.0) {
    if (!rng) throw std::invalid_argument("train-mode dropout needs an rng");
    const double keep = 1.0 - head.dropout_rate();
    std::vector<double> m(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
      m[i] = rng->uniform() < keep ? 1.0 / keep : 0.0;
      x[i] *= m[i];
    }
    if (mask) *mask = std::move(m);
  } else if (mask) {
    mask->assign(x.size(), 1.0);
  }
  std::vector<double> logits(head.outputs());
  for (std::size_t o = 0; o < head.outputs(); ++o) {
    auto wr = w.row(o);
    double acc = b.values[o];
    for (std::size_t i = 0; i < x.size(); ++i) acc += wr[i] * x[i];
    logits[o] = acc;
  }
  return logits;
}

// Accumulates weight/bias gradients into `grads` (layout of
// head.parameters()) and returns d loss / d input.
inline std::vector<double> head_backward(const ClassifierHead& head,
                                         std::span<const double> input,
                                         std::span<const double> mask,
                                         std::span<const double> dlogits,
                                         ParameterSet& grads) {
  const std::size_t n = head.input_width();
  if (input.size() != n || (!mask.empty() && mask.size() != n) ||
      dlogits.size() != head.outputs())
    throw ShapeError("head_backward shape mismatch");
  const Tensor& w = head.parameters().at("weight");
  Tensor& dw = grads.at("weight");
  Tensor& db = grads.at("bias");
  std::vector<double> dinput(n, 0.0);
  for (std::size_t o = 0; o < head.outputs(); ++o) {
    const double g = dlogits[o];
    db.values[o] += g;
    auto wr = w.row(o);
    auto dwr = dw.row(o);
    for (std::size_t i = 0; i < n; ++i) {
      const double m = mask.empty() ? 1.0 : mask[i];
      dwr[i] += g * input[i] * m;
      dinput[i] += g * wr[i] * m;
    }
  }
  return dinput;
}

}  // namespace hostility
