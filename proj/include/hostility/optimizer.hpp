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

#include "hostility/tensor.hpp"

namespace hostility {

// Adam with bias correction. One AdamState per parameter set.
struct AdamState {
  ParameterSet m;
  ParameterSet v;
  long step = 0;

  explicit AdamState(const ParameterSet& params)
      : m(params.zeros_like()), v(params.zeros_like()) {}
};

struct Adam {
  double learning_rate = 1e-5;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;

  void update(ParameterSet& params, const ParameterSet& grads,
              AdamState& state) const {
    if (!params.same_layout(grads) || !params.same_layout(state.m))
      throw ShapeError("Adam: parameter/gradient layout mismatch");
    ++state.step;
    const double c1 = 1.0 - std::pow(beta1, static_cast<double>(state.step));
    const double c2 = 1.0 - std::pow(beta2, static_cast<double>(state.step));
    auto& pt = params.tensors();
    const auto& gt = grads.tensors();
    auto& mt = state.m.tensors();
    auto& vt = state.v.tensors();
    for (std::size_t t = 0; t < pt.size(); ++t) {
      auto& p = pt[t].values;
      const auto& g = gt[t].values;
      auto& m = mt[t].values;
      auto& v = vt[t].values;
      for (std::size_t i = 0; i < p.size(); ++i) {
        m[i] = beta1 * m[i] + (1.0 - beta1) * g[i];
        v[i] = beta2 * v[i] + (1.0 - beta2) * g[i] * g[i];
        const double mhat = m[i] / c1;
        const double vhat = v[i] / c2;
        p[i] -= learning_rate * mhat / (std::sqrt(vhat) + epsilon);
      }
    }
  }
};

}  // namespace hostility
