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
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "hostility/encoder.hpp"

namespace hostility {

// Small deterministic attention encoder for desk-scale runs:
//
//   X  = E[token] + P[position]
//   H  = X + MultiHeadSelfAttention(X) * Wo + bo
//   Y  = H + GELU(H * W1 + b1) * W2 + b2
//
// Y is returned as the token representations; Y[0] sits over the
// sequence-start token.
class TinyEncoder final : public Encoder {
 public:
  explicit TinyEncoder(EncoderSpec spec) : spec_(std::move(spec)) {
    if (spec_.kind != EncoderKind::kTinyReference)
      throw std::invalid_argument("TinyEncoder needs a tiny-reference spec");
    if (spec_.attention_heads == 0 || spec_.width % spec_.attention_heads != 0)
      throw ShapeError("width must be a multiple of attention_heads");
    if (spec_.buckets < 2) throw ShapeError("need at least 2 buckets");
    const std::size_t d = spec_.width;
    const std::size_t f = spec_.ffn_width;
    params_.add("embedding", {spec_.buckets, d});
    params_.add("position", {spec_.max_length, d});
    for (const char* p : {"query", "key", "value", "output"}) {
      params_.add(std::string(p) + ".weight", {d, d});
      params_.add(std::string(p) + ".bias", {d});
    }
    params_.add("ffn_in.weight", {d, f});
    params_.add("ffn_in.bias", {f});
    params_.add("ffn_out.weight", {f, d});
    params_.add("ffn_out.bias", {d});
    initialize();
  }

  const EncoderSpec& spec() const override { return spec_; }

  TokenSequence tokenize(const CleanText& text) const override {
    return tokenize_truncate(text, spec_.max_length, spec_.buckets);
  }

  EncoderOutput forward(const TokenSequence& tokens,
                        std::unique_ptr<EncoderTape>* tape_out) const override {
    const std::size_t len = tokens.size();
    const std::size_t d = spec_.width;
    const std::size_t f = spec_.ffn_width;
    const std::size_t nh = spec_.attention_heads;
    const std::size_t dh = d / nh;
    if (len == 0) throw ShapeError("empty token sequence");
    if (len > spec_.max_length)
      throw ShapeError("sequence length " + std::to_string(len) +
                       " exceeds max_length " + std::to_string(spec_.max_length));
    for (auto id : tokens.token_ids)
      if (id >= spec_.buckets)
        throw std::out_of_range("token id " + std::to_string(id) +
                                " outside vocabulary of " +
                                std::to_string(spec_.buckets));

    auto tape = std::make_unique<Tape>();
    Tape& t = *tape;
    t.ids = tokens.token_ids;
    t.len = len;

    const Tensor& emb = params_.at("embedding");
    const Tensor& pos = params_.at("position");
    t.x.assign(len * d, 0.0);
    for (std::size_t i = 0; i < len; ++i) {
      auto e = emb.row(t.ids[i]);
      auto p = pos.row(i);
      for (std::size_t c = 0; c < d; ++c) t.x[i * d + c] = e[c] + p[c];
    }

    t.q.assign(len * d, 0.0);
    t.k.assign(len * d, 0.0);
    t.v.assign(len * d, 0.0);
    linalg::affine(t.x, len, d, params_.at("query.weight"),
                   params_.at("query.bias"), t.q);
    linalg::affine(t.x, len, d, params_.at("key.weight"), params_.at("key.bias"),
                   t.k);
    linalg::affine(t.x, len, d, params_.at("value.weight"),
                   params_.at("value.bias"), t.v);

    const double scale = 1.0 / std::sqrt(static_cast<double>(dh));
    t.attn.assign(nh * len * len, 0.0);
    t.ctx.assign(len * d, 0.0);
    for (std::size_t h = 0; h < nh; ++h) {
      const std::size_t off = h * dh;
      for (std::size_t i = 0; i < len; ++i) {
        double* a = t.attn.data() + (h * len + i) * len;
        double mx = -std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < len; ++j) {
          double s = 0.0;
          for (std::size_t c = 0; c < dh; ++c)
            s += t.q[i * d + off + c] * t.k[j * d + off + c];
          a[j] = s * scale;
          mx = std::max(mx, a[j]);
        }
        double z = 0.0;
        for (std::size_t j = 0; j < len; ++j) {
          a[j] = std::exp(a[j] - mx);
          z += a[j];
        }
        for (std::size_t j = 0; j < len; ++j) a[j] /= z;
        for (std::size_t j = 0; j < len; ++j)
          for (std::size_t c = 0; c < dh; ++c)
            t.ctx[i * d + off + c] += a[j] * t.v[j * d + off + c];
      }
    }

    t.h.assign(len * d, 0.0);
    linalg::affine(t.ctx, len, d, params_.at("output.weight"),
                   params_.at("output.bias"), t.h);
    for (std::size_t i = 0; i < len * d; ++i) t.h[i] += t.x[i];

    t.pre.assign(len * f, 0.0);
    linalg::affine(t.h, len, d, params_.at("ffn_in.weight"),
                   params_.at("ffn_in.bias"), t.pre);
    t.act.resize(len * f);
    for (std::size_t i = 0; i < len * f; ++i) t.act[i] = gelu(t.pre[i]);

    EncoderOutput out;
    out.length = len;
    out.width = d;
    out.token_reps.assign(len * d, 0.0);
    linalg::affine(t.act, len, f, params_.at("ffn_out.weight"),
                   params_.at("ffn_out.bias"), out.token_reps);
    for (std::size_t i = 0; i < len * d; ++i) out.token_reps[i] += t.h[i];

    if (tape_out) *tape_out = std::move(tape);
    return out;
  }

  void backward(const EncoderTape& base, std::span<const double> dy,
                ParameterSet& grads) const override {
    const auto* tp = dynamic_cast<const Tape*>(&base);
    if (!tp) throw std::invalid_argument("tape not produced by TinyEncoder");
    const Tape& t = *tp;
    const std::size_t len = t.len;
    const std::size_t d = spec_.width;
    const std::size_t f = spec_.ffn_width;
    const std::size_t nh = spec_.attention_heads;
    const std::size_t dh = d / nh;
    if (dy.size() != len * d) throw ShapeError("gradient shape mismatch");

    // Y = H + FFN(H)
    std::vector<double> dh_res(dy.begin(), dy.end());
    std::vector<double> dact(len * f, 0.0);
    linalg::affine_backward(t.act, len, f, params_.at("ffn_out.weight"), dy,
                            grads.at("ffn_out.weight"), grads.at("ffn_out.bias"),
                            dact);
    for (std::size_t i = 0; i < len * f; ++i) dact[i] *= gelu_grad(t.pre[i]);
    linalg::affine_backward(t.h, len, d, params_.at("ffn_in.weight"), dact,
                            grads.at("ffn_in.weight"), grads.at("ffn_in.bias"),
                            dh_res);

    // H = X + Ctx * Wo + bo
    std::vector<double> dx(dh_res);
    std::vector<double> dctx(len * d, 0.0);
    linalg::affine_backward(t.ctx, len, d, params_.at("output.weight"), dh_res,
                            grads.at("output.weight"), grads.at("output.bias"),
                            dctx);

    const double scale = 1.0 / std::sqrt(static_cast<double>(dh));
    std::vector<double> dq(len * d, 0.0), dk(len * d, 0.0), dv(len * d, 0.0);
    std::vector<double> da(len);
    for (std::size_t h = 0; h < nh; ++h) {
      const std::size_t off = h * dh;
      for (std::size_t i = 0; i < len; ++i) {
        const double* a = t.attn.data() + (h * len + i) * len;
        const double* dci = dctx.data() + i * d + off;
        double dot = 0.0;
        for (std::size_t j = 0; j < len; ++j) {
          double s = 0.0;
          for (std::size_t c = 0; c < dh; ++c) {
            s += dci[c] * t.v[j * d + off + c];
            dv[j * d + off + c] += a[j] * dci[c];
          }
          da[j] = s;
          dot += s * a[j];
        }
        for (std::size_t j = 0; j < len; ++j) {
          const double ds = a[j] * (da[j] - dot) * scale;
          if (ds == 0.0) continue;
          for (std::size_t c = 0; c < dh; ++c) {
            dq[i * d + off + c] += ds * t.k[j * d + off + c];
            dk[j * d + off + c] += ds * t.q[i * d + off + c];
          }
        }
      }
    }
    linalg::affine_backward(t.x, len, d, params_.at("query.weight"), dq,
                            grads.at("query.weight"), grads.at("query.bias"), dx);
    linalg::affine_backward(t.x, len, d, params_.at("key.weight"), dk,
                            grads.at("key.weight"), grads.at("key.bias"), dx);
    linalg::affine_backward(t.x, len, d, params_.at("value.weight"), dv,
                            grads.at("value.weight"), grads.at("value.bias"), dx);

    Tensor& demb = grads.at("embedding");
    Tensor& dpos = grads.at("position");
    for (std::size_t i = 0; i < len; ++i) {
      auto e = demb.row(t.ids[i]);
      auto p = dpos.row(i);
      for (std::size_t c = 0; c < d; ++c) {
        e[c] += dx[i * d + c];
        p[c] += dx[i * d + c];
      }
    }
  }

  ParameterSet& parameters() override { return params_; }
  const ParameterSet& parameters() const override { return params_; }

  std::unique_ptr<Encoder> clone() const override {
    return std::make_unique<TinyEncoder>(*this);
  }

 private:
  struct Tape final : EncoderTape {
    std::vector<std::uint32_t> ids;
    std::size_t len = 0;
    std::vector<double> x, q, k, v, attn, ctx, h, pre, act;
  };

  // tanh approximation of GELU; smooth, so finite differences behave.
  static double gelu(double x) {
    constexpr double c = 0.7978845608028654;  // sqrt(2/pi)
    return 0.5 * x * (1.0 + std::tanh(c * (x + 0.044715 * x * x * x)));
  }
  static double gelu_grad(double x) {
    constexpr double c = 0.7978845608028654;
    const double u = c * (x + 0.044715 * x * x * x);
    const double th = std::tanh(u);
    const double du = c * (1.0 + 3.0 * 0.044715 * x * x);
    return 0.5 * (1.0 + th) + 0.5 * x * (1.0 - th * th) * du;
  }

  void initialize() {
    Rng rng(derive_seed(spec_.seed, 0x7e1c0de));
    const double d = static_cast<double>(spec_.width);
    const double f = static_cast<double>(spec_.ffn_width);
    for (auto& t : params_.tensors()) {
      double stddev = 0.0;
      if (t.name == "embedding") {
        stddev = 0.5;
      } else if (t.name == "position") {
        stddev = 0.1;
      } else if (t.name.ends_with(".weight")) {
        stddev = 1.0 / std::sqrt(t.name == "ffn_out.weight" ? f : d);
      }
      if (stddev == 0.0) continue;
      for (auto& v : t.values) v = stddev * rng.normal();
    }
  }

  EncoderSpec spec_;
  ParameterSet params_;
};

inline std::unique_ptr<Encoder> make_encoder(const EncoderSpec& spec) {
  if (spec.kind == EncoderKind::kTinyReference)
    return std::make_unique<TinyEncoder>(spec);
  EncoderFactory factory;
  {
    std::lock_guard lock(detail::encoder_registry_mutex());
    auto it = detail::encoder_registry().find(spec.name);
    if (it != detail::encoder_registry().end()) factory = it->second;
  }
  if (!factory)
    throw std::invalid_argument("no encoder adapter registered under '" +
                                spec.name + "'");
  return factory(spec);
}

}  // namespace hostility
