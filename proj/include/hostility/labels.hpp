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
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hostility/common.hpp"

namespace hostility {

// The four hostility sub-dimensions, in LabelSet field order.
enum class Dimension { kFake = 0, kHate = 1, kOffensive = 2, kDefamation = 3 };

inline constexpr std::array<Dimension, 4> kDimensions = {
    Dimension::kFake, Dimension::kHate, Dimension::kOffensive,
    Dimension::kDefamation};

inline constexpr std::string_view dimension_name(Dimension d) {
  switch (d) {
    case Dimension::kFake: return "fake";
    case Dimension::kHate: return "hate";
    case Dimension::kOffensive: return "offensive";
    case Dimension::kDefamation: return "defamation";
  }
  return "?";
}

inline std::optional<Dimension> dimension_from_name(std::string_view name) {
  for (Dimension d : kDimensions)
    if (dimension_name(d) == name) return d;
  return std::nullopt;
}

template <typename T>
using PerDimension = std::array<T, 4>;

inline constexpr std::size_t index(Dimension d) {
  return static_cast<std::size_t>(d);
}

// Coarse hostile flag plus the four fine flags. A default-constructed set is
// the non-hostile label.
struct LabelSet {
  bool hostile = false;
  bool fake = false;
  bool hate = false;
  bool offensive = false;
  bool defamation = false;

  bool operator==(const LabelSet&) const = default;

  bool get(Dimension d) const {
    switch (d) {
      case Dimension::kFake: return fake;
      case Dimension::kHate: return hate;
      case Dimension::kOffensive: return offensive;
      case Dimension::kDefamation: return defamation;
    }
    return false;
  }

  void set(Dimension d, bool v) {
    switch (d) {
      case Dimension::kFake: fake = v; break;
      case Dimension::kHate: hate = v; break;
      case Dimension::kOffensive: offensive = v; break;
      case Dimension::kDefamation: defamation = v; break;
    }
  }

  bool any_fine() const { return fake || hate || offensive || defamation; }

  // hostile <=> at least one fine flag.
  bool valid() const { return hostile == any_fine(); }

  // Stratification key: the 5-flag combination packed into 5 bits.
  unsigned key() const {
    return (hostile ? 1u : 0u) | (fake ? 2u : 0u) | (hate ? 4u : 0u) |
           (offensive ? 8u : 0u) | (defamation ? 16u : 0u);
  }

  // "non-hostile" or the comma-joined fine tags in LabelSet field order.
  std::string to_string() const {
    if (!hostile) return "non-hostile";
    std::string out;
    for (Dimension d : kDimensions) {
      if (!get(d)) continue;
      if (!out.empty()) out += ',';
      out += dimension_name(d);
    }
    return out;
  }

  static LabelSet from_fine(bool fake, bool hate, bool offensive,
                            bool defamation) {
    LabelSet l{false, fake, hate, offensive, defamation};
    l.hostile = l.any_fine();
    return l;
  }
};

struct LabeledPost {
  std::string id;
  std::string text;
  std::optional<LabelSet> labels;
};

using Corpus = std::vector<LabeledPost>;

struct LabelCounts {
  std::size_t total = 0;
  std::size_t non_hostile = 0;
  std::size_t hostile = 0;
  std::size_t fake = 0;
  std::size_t hate = 0;
  std::size_t offensive = 0;
  std::size_t defamation = 0;

  bool operator==(const LabelCounts&) const = default;

  std::size_t fine(Dimension d) const {
    switch (d) {
      case Dimension::kFake: return fake;
      case Dimension::kHate: return hate;
      case Dimension::kOffensive: return offensive;
      case Dimension::kDefamation: return defamation;
    }
    return 0;
  }
};

}  // namespace hostility
