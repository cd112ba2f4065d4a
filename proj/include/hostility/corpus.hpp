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
#include <cctype>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include <nlohmann/json.hpp>

#include "hostility/common.hpp"
#include "hostility/csv.hpp"
#include "hostility/labels.hpp"

namespace hostility {

enum class LabelPolicy {
  kRequired,  // training / evaluation corpora
  kOptional,  // prediction inputs; the labels column may be missing or blank
};

namespace detail {

inline std::string trim(std::string_view s) {
  const auto ws = [](unsigned char c) { return std::isspace(c) != 0; };
  std::size_t b = 0, e = s.size();
  while (b < e && ws(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && ws(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

inline std::string lower_ascii(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

}  // namespace detail

// Parses a labels field such as "fake,offensive" or "non-hostile".
// `row` is only used in error messages.
inline LabelSet parse_labels(std::string_view field, std::size_t row) {
  LabelSet labels;
  bool non_hostile = false;
  bool any = false;
  std::size_t start = 0;
  while (start <= field.size()) {
    std::size_t comma = field.find(',', start);
    if (comma == std::string_view::npos) comma = field.size();
    const std::string token =
        detail::lower_ascii(detail::trim(field.substr(start, comma - start)));
    start = comma + 1;
    if (token.empty()) continue;
    any = true;
    if (token == "non-hostile") {
      non_hostile = true;
    } else if (auto d = dimension_from_name(token)) {
      labels.set(*d, true);
    } else {
      throw DataError("row " + std::to_string(row) + ": unknown label token '" +
                      token + "'");
    }
  }
  if (!any) throw DataError("row " + std::to_string(row) + ": empty labels field");
  if (non_hostile && labels.any_fine())
    throw DataError("row " + std::to_string(row) +
                    ": contradictory labels (non-hostile together with a "
                    "hostile dimension)");
  labels.hostile = labels.any_fine();
  return labels;
}

// Builds posts from a table with `id`, `text` and (optionally) `labels`
// columns. Row numbers in errors are 1-based data rows.
inline Corpus parse_corpus(const csv::Table& table,
                           LabelPolicy policy = LabelPolicy::kRequired) {
  const int id_col = table.column("id");
  const int text_col = table.column("text");
  const int labels_col = table.column("labels");
  if (id_col < 0) throw DataError("missing 'id' column");
  if (text_col < 0) throw DataError("missing 'text' column");
  if (labels_col < 0 && policy == LabelPolicy::kRequired)
    throw DataError("missing 'labels' column");

  Corpus corpus;
  corpus.reserve(table.rows.size());
  std::unordered_set<std::string> seen;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    const std::size_t row_no = r + 1;
    LabeledPost post;
    post.id = row[static_cast<std::size_t>(id_col)];
    post.text = row[static_cast<std::size_t>(text_col)];
    if (post.id.empty())
      throw DataError("row " + std::to_string(row_no) + ": empty id");
    if (detail::trim(post.text).empty())
      throw DataError("row " + std::to_string(row_no) + ": empty text");
    if (!seen.insert(post.id).second)
      throw DataError("row " + std::to_string(row_no) + ": duplicate id '" +
                      post.id + "'");
    if (labels_col >= 0) {
      const auto& field = row[static_cast<std::size_t>(labels_col)];
      if (policy == LabelPolicy::kRequired || !detail::trim(field).empty())
        post.labels = parse_labels(field, row_no);
    }
    corpus.push_back(std::move(post));
  }
  return corpus;
}

inline csv::Table serialize_corpus(const Corpus& corpus) {
  csv::Table table;
  table.header = {"id", "text", "labels"};
  table.rows.reserve(corpus.size());
  for (const auto& p : corpus)
    table.rows.push_back({p.id, p.text, p.labels ? p.labels->to_string() : ""});
  return table;
}

inline Corpus read_corpus(const std::filesystem::path& path,
                          LabelPolicy policy = LabelPolicy::kRequired) {
  try {
    return parse_corpus(csv::read(path), policy);
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

inline void write_corpus(const std::filesystem::path& path, const Corpus& corpus) {
  csv::write(path, serialize_corpus(corpus));
}

inline const LabelSet& require_labels(const LabeledPost& post) {
  if (!post.labels) throw DataError("post '" + post.id + "' has no labels");
  return *post.labels;
}

inline LabelCounts label_stats(const Corpus& corpus) {
  LabelCounts c;
  for (const auto& post : corpus) {
    const LabelSet& l = require_labels(post);
    ++c.total;
    if (l.hostile) ++c.hostile; else ++c.non_hostile;
    c.fake += l.fake;
    c.hate += l.hate;
    c.offensive += l.offensive;
    c.defamation += l.defamation;
  }
  return c;
}

inline nlohmann::json to_json(const LabelCounts& c) {
  return {{"total", c.total},         {"non_hostile", c.non_hostile},
          {"hostile", c.hostile},     {"fake", c.fake},
          {"hate", c.hate},           {"offensive", c.offensive},
          {"defamation", c.defamation}};
}

// Posts with hostile = true, order preserved.
inline Corpus hostile_subset(const Corpus& corpus) {
  Corpus out;
  for (const auto& post : corpus)
    if (require_labels(post).hostile) out.push_back(post);
  return out;
}

struct SplitRatios {
  double train = 0.7;
  double validation = 0.1;
  double test = 0.2;
};

struct SplitBundle {
  Corpus train;
  Corpus validation;
  Corpus test;
  std::uint64_t seed = 0;
  SplitRatios ratios;
  std::vector<std::string> warnings;
};

namespace detail {

// The five label dimensions used for stratification: hostile + four fine.
inline std::array<bool, 5> flags(const LabelSet& l) {
  return {l.hostile, l.fake, l.hate, l.offensive, l.defamation};
}

struct StratumState {
  unsigned key = 0;
  std::vector<std::size_t> members;  // shuffled corpus indices
  std::size_t taken = 0;             // members already assigned to a split
  bool eligible = true;
  std::array<bool, 5> dims{};
};

// Chooses how many members of each stratum go into one split of `target`
// posts. Floors of the proportional quota are assigned first; the remaining
// slots go one at a time to the stratum that best moves every dimension's
// positive count towards its proportional target.
inline std::vector<std::size_t> allocate_split(
    const std::vector<StratumState>& strata, double ratio, std::size_t target,
    const std::array<double, 5>& corpus_positive, std::size_t corpus_size) {
  std::vector<std::size_t> alloc(strata.size(), 0);
  std::array<double, 5> want{};
  for (std::size_t d = 0; d < 5; ++d)
    want[d] = corpus_positive[d] * static_cast<double>(target) /
              static_cast<double>(corpus_size);

  std::array<double, 5> have{};
  std::size_t assigned = 0;
  for (std::size_t g = 0; g < strata.size(); ++g) {
    const auto& s = strata[g];
    if (!s.eligible) continue;
    const std::size_t avail = s.members.size() - s.taken;
    const auto quota = static_cast<std::size_t>(
        std::floor(static_cast<double>(s.members.size()) * ratio + 1e-9));
    alloc[g] = std::min(avail, quota);
    assigned += alloc[g];
    for (std::size_t d = 0; d < 5; ++d)
      if (s.dims[d]) have[d] += static_cast<double>(alloc[g]);
  }

  while (assigned < target) {
    std::ptrdiff_t best = -1;
    double best_cost = 0.0;
    for (std::size_t g = 0; g < strata.size(); ++g) {
      const auto& s = strata[g];
      if (!s.eligible || s.taken + alloc[g] >= s.members.size()) continue;
      double cost = 0.0;
      for (std::size_t d = 0; d < 5; ++d) {
        const double after = have[d] + (s.dims[d] ? 1.0 : 0.0) - want[d];
        cost += after * after;
      }
      const double ideal = static_cast<double>(s.members.size()) * ratio;
      const double before_dev = static_cast<double>(alloc[g]) - ideal;
      const double after_dev = before_dev + 1.0;
      cost += 0.1 * (after_dev * after_dev - before_dev * before_dev);
      if (best < 0 || cost < best_cost) {
        best = static_cast<std::ptrdiff_t>(g);
        best_cost = cost;
      }
    }
    if (best < 0) break;  // every eligible stratum exhausted
    const auto g = static_cast<std::size_t>(best);
    ++alloc[g];
    ++assigned;
    for (std::size_t d = 0; d < 5; ++d)
      if (strata[g].dims[d]) have[d] += 1.0;
  }
  return alloc;
}

}  // namespace detail

// Stratified train/validation/test split keyed on the full 5-flag label
// combination. Deterministic for a fixed seed; split sizes are
// floor(N * ratio) for validation and test with the remainder in train.
inline SplitBundle stratified_split(const Corpus& corpus, SplitRatios ratios,
                                    std::uint64_t seed) {
  const double sum = ratios.train + ratios.validation + ratios.test;
  if (ratios.train < 0 || ratios.validation < 0 || ratios.test < 0)
    throw std::invalid_argument("split ratios must be non-negative");
  if (std::abs(sum - 1.0) > 1e-9)
    throw std::invalid_argument("split ratios must sum to 1");
  if (corpus.empty()) throw std::invalid_argument("cannot split an empty corpus");

  const std::size_t n = corpus.size();
  const int nonempty_splits = (ratios.train > 0) + (ratios.validation > 0) +
                              (ratios.test > 0);

  std::map<unsigned, detail::StratumState> by_key;
  std::array<double, 5> positive{};
  for (std::size_t i = 0; i < n; ++i) {
    const LabelSet& l = require_labels(corpus[i]);
    auto& s = by_key[l.key()];
    s.key = l.key();
    s.dims = detail::flags(l);
    s.members.push_back(i);
    for (std::size_t d = 0; d < 5; ++d) positive[d] += s.dims[d] ? 1.0 : 0.0;
  }

  SplitBundle bundle;
  bundle.seed = seed;
  bundle.ratios = ratios;

  std::vector<detail::StratumState> strata;
  for (auto& [key, s] : by_key) {
    Rng rng(derive_seed(seed, key));
    rng.shuffle(s.members);
    if (static_cast<int>(s.members.size()) < nonempty_splits) {
      s.eligible = false;
      LabelSet l;
      l.hostile = s.dims[0];
      l.fake = s.dims[1];
      l.hate = s.dims[2];
      l.offensive = s.dims[3];
      l.defamation = s.dims[4];
      bundle.warnings.push_back("label combination '" + l.to_string() +
                                "' has " + std::to_string(s.members.size()) +
                                " member(s); placed in train");
    }
    strata.push_back(std::move(s));
  }

  const auto target = [&](double r) {
    return static_cast<std::size_t>(std::floor(static_cast<double>(n) * r + 1e-9));
  };

  std::vector<int> assignment(n, 0);  // 0 train, 1 validation, 2 test
  const std::array<std::pair<int, double>, 2> order = {
      std::pair{2, ratios.test}, std::pair{1, ratios.validation}};
  for (const auto& [split, ratio] : order) {
    const std::size_t want = target(ratio);
    if (want == 0) continue;
    const auto alloc = detail::allocate_split(strata, ratio, want, positive, n);
    std::size_t got = 0;
    for (std::size_t g = 0; g < strata.size(); ++g) {
      auto& s = strata[g];
      for (std::size_t k = 0; k < alloc[g]; ++k)
        assignment[s.members[s.taken + k]] = split;
      s.taken += alloc[g];
      got += alloc[g];
    }
    if (got < want)
      bundle.warnings.push_back("split short by " + std::to_string(want - got) +
                                " post(s): not enough stratifiable posts");
  }

  for (std::size_t i = 0; i < n; ++i) {
    switch (assignment[i]) {
      case 0: bundle.train.push_back(corpus[i]); break;
      case 1: bundle.validation.push_back(corpus[i]); break;
      default: bundle.test.push_back(corpus[i]); break;
    }
  }
  return bundle;
}

inline nlohmann::json split_manifest(const SplitBundle& b) {
  nlohmann::json j;
  j["seed"] = b.seed;
  j["ratios"] = {b.ratios.train, b.ratios.validation, b.ratios.test};
  j["counts"] = {{"train", b.train.size()},
                 {"validation", b.validation.size()},
                 {"test", b.test.size()}};
  j["label_counts"] = {{"train", to_json(label_stats(b.train))},
                       {"validation", to_json(label_stats(b.validation))},
                       {"test", to_json(label_stats(b.test))}};
  j["warnings"] = b.warnings;
  return j;
}

}  // namespace hostility
