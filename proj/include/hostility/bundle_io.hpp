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

#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hostility/csv.hpp"
#include "hostility/strategies.hpp"

namespace hostility {

// On-disk layout of a trained bundle directory:
//   metadata.json   strategy, config, units (encoder spec, heads), tensor table
//   tensors.bin     every tensor as little-endian float64, concatenated
//   history.jsonl   one training-history record per line
inline constexpr std::string_view kBundleFormat = "hostility-bundle/1";

namespace detail {

inline void append_le(std::string& out, double v) {
  auto bits = std::bit_cast<std::uint64_t>(v);
  for (int i = 0; i < 8; ++i) {
    out.push_back(static_cast<char>(bits & 0xff));
    bits >>= 8;
  }
}

inline double read_le(const char* p) {
  std::uint64_t bits = 0;
  for (int i = 7; i >= 0; --i) bits = (bits << 8) | static_cast<unsigned char>(p[i]);
  return std::bit_cast<double>(bits);
}

struct TensorWriter {
  nlohmann::json table = nlohmann::json::array();
  std::string blob;

  void add(const std::string& prefix, const ParameterSet& params) {
    for (const auto& t : params.tensors()) {
      table.push_back({{"name", prefix + t.name},
                       {"shape", t.shape},
                       {"offset", blob.size() / 8},
                       {"count", t.size()}});
      for (double v : t.values) append_le(blob, v);
    }
  }
};

inline void load_tensors(const std::string& prefix, ParameterSet& params,
                         const std::map<std::string, nlohmann::json>& table,
                         const std::string& blob) {
  for (auto& t : params.tensors()) {
    auto it = table.find(prefix + t.name);
    if (it == table.end()) throw DataError("bundle is missing tensor " + prefix + t.name);
    const auto& entry = it->second;
    if (entry.at("shape").get<std::vector<std::size_t>>() != t.shape)
      throw DataError("tensor " + prefix + t.name + " has an unexpected shape");
    const auto offset = entry.at("offset").get<std::size_t>();
    const auto count = entry.at("count").get<std::size_t>();
    if (count != t.size() || (offset + count) * 8 > blob.size())
      throw DataError("tensor " + prefix + t.name + " lies outside tensors.bin");
    for (std::size_t i = 0; i < count; ++i)
      t.values[i] = read_le(blob.data() + (offset + i) * 8);
  }
}

}  // namespace detail

inline nlohmann::json bundle_metadata(const TrainedBundle& bundle) {
  nlohmann::json units = nlohmann::json::array();
  for (const auto& u : bundle.units) {
    nlohmann::json heads = nlohmann::json::array();
    for (const auto& h : u.heads)
      heads.push_back({{"task", h.task},
                       {"input_width", h.head.input_width()},
                       {"outputs", h.head.outputs()},
                       {"dropout", h.head.dropout_rate()}});
    units.push_back({{"role", u.role},
                     {"encoder", u.encoder->spec()},
                     {"fuses_auxiliary", u.fuses_auxiliary},
                     {"heads", heads}});
  }
  return {{"format", kBundleFormat},
          {"strategy", strategy_name(bundle.strategy)},
          {"config", bundle.config},
          {"units", units}};
}

inline std::string history_jsonl(const std::vector<HistoryEntry>& history) {
  std::string out;
  for (const auto& h : history) out += to_json(h).dump() + "\n";
  return out;
}

inline void save_bundle(const TrainedBundle& bundle, const std::filesystem::path& dir) {
  check_bundle_shapes(bundle);
  std::filesystem::create_directories(dir);
  detail::TensorWriter writer;
  for (const auto& u : bundle.units) {
    writer.add(u.role + "/encoder/", u.encoder->parameters());
    for (const auto& h : u.heads) writer.add(u.role + "/head/" + h.task + "/", h.head.parameters());
  }
  nlohmann::json meta = bundle_metadata(bundle);
  meta["tensors"] = writer.table;
  meta["blob"] = {{"file", "tensors.bin"}, {"dtype", "float64"}, {"byte_order", "little"}};
  csv::write_file(dir / "metadata.json", meta.dump(2) + "\n");
  csv::write_file(dir / "tensors.bin", writer.blob);
  csv::write_file(dir / "history.jsonl", history_jsonl(bundle.history));
}

inline TrainedBundle load_bundle(const std::filesystem::path& dir) {
  nlohmann::json meta;
  try {
    meta = nlohmann::json::parse(csv::read_file(dir / "metadata.json"));
  } catch (const nlohmann::json::exception& e) {
    throw DataError("cannot parse " + (dir / "metadata.json").string() + ": " + e.what());
  }
  if (meta.value("format", std::string()) != kBundleFormat)
    throw DataError(dir.string() + " is not a " + std::string(kBundleFormat) + " directory");
  const std::string blob = csv::read_file(dir / "tensors.bin");
  std::map<std::string, nlohmann::json> table;
  for (const auto& entry : meta.at("tensors")) table[entry.at("name")] = entry;

  TrainedBundle bundle;
  bundle.strategy = strategy_from_name(meta.at("strategy").get<std::string>());
  bundle.config = meta.at("config").get<StrategyConfig>();
  for (const auto& uj : meta.at("units")) {
    ModelUnit unit;
    unit.role = uj.at("role").get<std::string>();
    unit.encoder = make_encoder(uj.at("encoder").get<EncoderSpec>());
    unit.fuses_auxiliary = uj.at("fuses_auxiliary").get<bool>();
    detail::load_tensors(unit.role + "/encoder/", unit.encoder->parameters(), table, blob);
    for (const auto& hj : uj.at("heads")) {
      NamedHead h{hj.at("task").get<std::string>(),
                  ClassifierHead(hj.at("input_width").get<std::size_t>(),
                                 hj.at("outputs").get<std::size_t>(),
                                 hj.at("dropout").get<double>())};
      detail::load_tensors(unit.role + "/head/" + h.task + "/", h.head.parameters(), table, blob);
      unit.heads.push_back(std::move(h));
    }
    bundle.units.push_back(std::move(unit));
  }
  if (std::filesystem::exists(dir / "history.jsonl")) {
    std::istringstream in(csv::read_file(dir / "history.jsonl"));
    for (std::string line; std::getline(in, line);) {
      if (line.empty()) continue;
      const auto j = nlohmann::json::parse(line);
      bundle.history.push_back({j.at("epoch"), j.at("split"), j.at("task"), j.at("loss"),
                                j.at("weighted_f1")});
    }
  }
  check_bundle_shapes(bundle);
  return bundle;
}

}  // namespace hostility
