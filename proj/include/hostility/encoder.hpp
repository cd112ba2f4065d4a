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

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "hostility/common.hpp"
#include "hostility/tensor.hpp"
#include "hostility/textprep.hpp"

namespace hostility {

inline constexpr std::size_t kDefaultMaxLength = 200;
inline constexpr std::uint32_t kSequenceStartId = 0;

struct TokenSequence {
  std::vector<std::uint32_t> token_ids;
  std::size_t size() const { return token_ids.size(); }
  bool operator==(const TokenSequence&) const = default;
};

// Per-token representations (length x width, row-major). Row 0 is the
// sequence-start position used as the pooled representation.
struct EncoderOutput {
  std::size_t length = 0;
  std::size_t width = 0;
  std::vector<double> token_reps;

  std::span<const double> row(std::size_t i) const& {
    return {token_reps.data() + i * width, width};
  }
  std::span<const double> first_token_rep() const& { return row(0); }
  std::span<const double> row(std::size_t) const&& = delete;
  std::span<const double> first_token_rep() const&& = delete;
};

enum class EncoderKind { kExternalPretrained, kTinyReference };

struct EncoderSpec {
  EncoderKind kind = EncoderKind::kTinyReference;
  std::string name = "tiny-reference";  // adapter name for external encoders
  std::size_t width = 32;
  std::size_t buckets = 4096;  // hashed vocabulary size, id 0 reserved
  std::size_t max_length = kDefaultMaxLength;
  std::size_t attention_heads = 2;
  std::size_t ffn_width = 64;
  std::uint64_t seed = 0;
  nlohmann::json options = nlohmann::json::object();  // adapter-specific

  bool operator==(const EncoderSpec&) const = default;
};

inline void to_json(nlohmann::json& j, const EncoderSpec& s) {
  j = {{"kind", s.kind == EncoderKind::kTinyReference ? "tiny-reference"
                                                      : "external-pretrained"},
       {"name", s.name},
       {"d", s.width},
       {"buckets", s.buckets},
       {"max_length", s.max_length},
       {"attention_heads", s.attention_heads},
       {"ffn_width", s.ffn_width},
       {"seed", s.seed},
       {"options", s.options}};
}

inline void from_json(const nlohmann::json& j, EncoderSpec& s) {
  EncoderSpec def;
  const std::string kind = j.value("kind", std::string("tiny-reference"));
  if (kind == "tiny-reference") {
    s.kind = EncoderKind::kTinyReference;
  } else if (kind == "external-pretrained") {
    s.kind = EncoderKind::kExternalPretrained;
  } else {
    throw DataError("unknown encoder kind '" + kind + "'");
  }
  s.name = j.value("name", s.kind == EncoderKind::kTinyReference
                               ? std::string("tiny-reference")
                               : std::string());
  s.width = j.value("d", def.width);
  s.buckets = j.value("buckets", def.buckets);
  s.max_length = j.value("max_length", def.max_length);
  s.attention_heads = j.value("attention_heads", def.attention_heads);
  s.ffn_width = j.value("ffn_width", def.ffn_width);
  s.seed = j.value("seed", def.seed);
  s.options = j.value("options", nlohmann::json::object());
  if (s.max_length < 1) throw DataError("encoder max_length must be >= 1");
  if (s.width < 1) throw DataError("encoder width must be >= 1");
}

// Opaque per-sequence activations kept by forward() for backward().
class EncoderTape {
 public:
  virtual ~EncoderTape() = default;
};

// Adapter interface for sequence encoders. The tiny reference encoder is
// built in; pre-trained transformers plug in via register_encoder().
//
// encode() is const and thread-safe over a shared model. Training code calls
// forward() with a tape, then backward() with the gradient of the loss with
// respect to every token representation.
class Encoder {
 public:
  virtual ~Encoder() = default;

  virtual const EncoderSpec& spec() const = 0;
  std::size_t width() const { return spec().width; }

  virtual TokenSequence tokenize(const CleanText& text) const = 0;

  virtual EncoderOutput forward(const TokenSequence& tokens,
                                std::unique_ptr<EncoderTape>* tape) const = 0;

  EncoderOutput encode(const TokenSequence& tokens) const {
    return forward(tokens, nullptr);
  }

  // grad_token_reps has length x width entries. Gradients are accumulated
  // into `grads`, which must have the layout of parameters().
  virtual void backward(const EncoderTape& tape,
                        std::span<const double> grad_token_reps,
                        ParameterSet& grads) const = 0;

  virtual ParameterSet& parameters() = 0;
  virtual const ParameterSet& parameters() const = 0;

  virtual std::unique_ptr<Encoder> clone() const = 0;
};

using EncoderFactory =
    std::function<std::unique_ptr<Encoder>(const EncoderSpec&)>;

namespace detail {
inline std::map<std::string, EncoderFactory>& encoder_registry() {
  static std::map<std::string, EncoderFactory> registry;
  return registry;
}
inline std::mutex& encoder_registry_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace detail

// Registers an external encoder adapter under spec.name.
inline void register_encoder(const std::string& name, EncoderFactory factory) {
  std::lock_guard lock(detail::encoder_registry_mutex());
  detail::encoder_registry()[name] = std::move(factory);
}

std::unique_ptr<Encoder> make_encoder(const EncoderSpec& spec);

// Whitespace tokenizer with hashed buckets. Word ids are
// 1 + fnv1a(word) % (buckets - 1); id 0 is the sequence-start token. Keeps
// the left prefix when the text is longer than max_length - 1 words.
inline TokenSequence tokenize_truncate(const CleanText& text,
                                       std::size_t max_length,
                                       std::size_t buckets = 4096) {
  if (max_length < 1) throw std::invalid_argument("max_length must be >= 1");
  if (buckets < 2) throw std::invalid_argument("need at least 2 buckets");
  TokenSequence seq;
  seq.token_ids.push_back(kSequenceStartId);
  std::string_view s = text.value();
  std::size_t i = 0;
  while (i < s.size() && seq.size() < max_length) {
    while (i < s.size() && s[i] == ' ') ++i;
    if (i >= s.size()) break;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ') ++j;
    const auto word = s.substr(i, j - i);
    seq.token_ids.push_back(
        static_cast<std::uint32_t>(1 + fnv1a64(word) % (buckets - 1)));
    i = j;
  }
  return seq;
}

}  // namespace hostility
