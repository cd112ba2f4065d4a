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

#include <string>
#include <vector>

#include "hostility/labels.hpp"

namespace hostility {

struct PostPrediction {
  std::string id;
  double coarse_probability = 0.0;
  PerDimension<double> fine_probabilities{};  // ungated, kDimensions order
  LabelSet labels;                            // thresholded and gated

  bool operator==(const PostPrediction&) const = default;
};

struct PredictionSet {
  std::vector<PostPrediction> posts;
  double threshold = 0.5;

  bool operator==(const PredictionSet&) const = default;
};

// Thresholds probabilities into a LabelSet. Fine flags are forced off when
// the coarse prediction is non-hostile; a hostile prediction with no fine
// probability above threshold is kept hostile with its single most probable
// dimension switched on, so the result always satisfies LabelSet::valid().
inline LabelSet threshold_labels(double coarse_probability,
                                 const PerDimension<double>& fine, double threshold) {
  LabelSet l;
  if (coarse_probability < threshold) return l;
  l.hostile = true;
  std::size_t best = 0;
  for (Dimension d : kDimensions) {
    l.set(d, fine[index(d)] >= threshold);
    if (fine[index(d)] > fine[best]) best = index(d);
  }
  if (!l.any_fine()) l.set(kDimensions[best], true);
  return l;
}

}  // namespace hostility
