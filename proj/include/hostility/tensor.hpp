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
#include <cstddef>
#include <functional>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "hostility/common.hpp"

namespace hostility {

// A named, dense, row-major array of doubles.
struct Tensor {
  std::string name;
  std::vector<std::size_t> shape;
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
  std::size_t rows() const { return shape.empty() ? 1 : shape.front(); }
  std::size_t cols() const {
    return shape.size() < 2 ? (shape.empty() ? 1 : shape.front()) : shape.back();
  }
  std::span<double> row(std::size_t r) { return {values.data() + r * cols(), cols()}; }
  std::span<const double> row(std::size_t r) const {
    return {values.data() + r * cols(), cols()};
  }
};

inline std::size_t shape_size(const std::vector<std::size_t>& shape) {
  return std::accumulate(shape.begin(), shape.end(), std::size_t{1},
                         std::multiplies<>());
}

// Ordered collection of tensors. Order is part of the serialized layout.
class ParameterSet {
 public:
  Tensor& add(std::string name, std::vector<std::size_t> shape) {
    if (find(name)) throw ShapeError("duplicate tensor name: " + name);
    Tensor t{std::move(name), std::move(shape), {}};
    t.values.assign(shape_size(t.shape), 0.0);
    tensors_.push_back(std::move(t));
    return tensors_.back();
  }

  Tensor* find(std::string_view name) {
    for (auto& t : tensors_)
      if (t.name == name) return &t;
    return nullptr;
  }
  const Tensor* find(std::string_view name) const {
    for (const auto& t : tensors_)
      if (t.name == name) return &t;
    return nullptr;
  }
  Tensor& at(std::string_view name) {
    if (auto* t = find(name)) return *t;
    throw ShapeError("no tensor named " + std::string(name));
  }
  const Tensor& at(std::string_view name) const {
    if (const auto* t = find(name)) return *t;
    throw ShapeError("no tensor named " + std::string(name));
  }

  std::vector<Tensor>& tensors() { return tensors_; }
  const std::vector<Tensor>& tensors() const { return tensors_; }

  std::size_t total_size() const {
    std::size_t n = 0;
    for (const auto& t : tensors_) n += t.size();
    return n;
  }

  // Same names and shapes, all zeros.
  ParameterSet zeros_like() const {
    ParameterSet out;
    for (const auto& t : tensors_) out.add(t.name, t.shape);
    return out;
  }

  void fill(double v) {
    for (auto& t : tensors_) std::fill(t.values.begin(), t.values.end(), v);
  }

  void scale(double s) {
    for (auto& t : tensors_)
      for (auto& v : t.values) v *= s;
  }

  bool same_layout(const ParameterSet& other) const {
    if (tensors_.size() != other.tensors_.size()) return false;
    for (std::size_t i = 0; i < tensors_.size(); ++i)
      if (tensors_[i].name != other.tensors_[i].name ||
          tensors_[i].shape != other.tensors_[i].shape)
        return false;
    return true;
  }

  bool operator==(const ParameterSet& other) const {
    if (!same_layout(other)) return false;
    for (std::size_t i = 0; i < tensors_.size(); ++i)
      if (tensors_[i].values != other.tensors_[i].values) return false;
    return true;
  }

 private:
  std::vector<Tensor> tensors_;
};

namespace linalg {

// out(rows x m) = a(rows x n) * b(n x m) + bias(m)
inline void affine(std::span<const double> a, std::size_t rows, std::size_t n,
                   const Tensor& b, const Tensor& bias, std::span<double> out) {
  const std::size_t m = b.cols();
  for (std::size_t r = 0; r < rows; ++r) {
    double* o = out.data() + r * m;
    std::copy(bias.values.begin(), bias.values.end(), o);
    const double* ar = a.data() + r * n;
    for (std::size_t k = 0; k < n; ++k) {
      const double av = ar[k];
      const double* br = b.values.data() + k * m;
      for (std::size_t j = 0; j < m; ++j) o[j] += av * br[j];
    }
  }
}

// Backward of affine: accumulates dW += a^T * dout, dbias += colsum(dout),
// and returns da = dout * W^T when `da` is non-empty.
inline void affine_backward(std::span<const double> a, std::size_t rows,
                            std::size_t n, const Tensor& w,
                            std::span<const double> dout, Tensor& dw,
                            Tensor& dbias, std::span<double> da) {
  const std::size_t m = w.cols();
  for (std::size_t r = 0; r < rows; ++r) {
    const double* ar = a.data() + r * n;
    const double* dr = dout.data() + r * m;
    for (std::size_t j = 0; j < m; ++j) dbias.values[j] += dr[j];
    for (std::size_t k = 0; k < n; ++k) {
      const double av = ar[k];
      double* dwr = dw.values.data() + k * m;
      const double* wr = w.values.data() + k * m;
      double acc = 0.0;
      for (std::size_t j = 0; j < m; ++j) {
        dwr[j] += av * dr[j];
        acc += dr[j] * wr[j];
      }
      if (!da.empty()) da[r * n + k] += acc;
    }
  }
}

}  // namespace linalg
}  // namespace hostility
