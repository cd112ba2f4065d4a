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

#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "hostility/hostility.hpp"

namespace hostility::cli {

namespace fs = std::filesystem;

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kDataError = 1;
inline constexpr int kUsageError = 2;

struct Progress {
  std::ostream& err;
  int verbosity = 1;
  void operator()(const std::string& msg, int level = 1) const {
    if (verbosity >= level) err << msg << '\n';
  }
};

inline std::vector<double> parse_ratios(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw CLI::ValidationError("--ratios", "not a number: '" + item + "'");
    }
  }
  if (out.size() != 3)
    throw CLI::ValidationError("--ratios", "expected three comma-separated fractions");
  return out;
}

// Finds DIR/<name>.csv or DIR/<name>.tsv.
inline fs::path split_file(const fs::path& dir, const std::string& name) {
  for (const char* ext : {".csv", ".tsv"}) {
    fs::path p = dir / (name + ext);
    if (fs::exists(p)) return p;
  }
  throw DataError("no " + name + ".csv or " + name + ".tsv in " + dir.string());
}

inline nlohmann::json read_json(const fs::path& path) {
  try {
    return nlohmann::json::parse(csv::read_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw DataError("cannot parse " + path.string() + ": " + e.what());
  }
}

inline void write_json(const fs::path& path, const nlohmann::json& j) {
  csv::write_file(path, j.dump(2) + "\n");
}

inline std::string fmt4(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

inline int run(int argc, const char* const* argv, std::ostream& err = std::cerr) {
  CLI::App app{"Multi-dimensional hostility detection for Devanagari posts"};
  app.name("hostility");
  app.require_subcommand(1);
  int verbosity = 1;
  app.add_flag("-v,--verbose", [&](std::int64_t n) { verbosity = 1 + static_cast<int>(n); },
               "More progress output on stderr");
  app.add_flag("-q,--quiet", [&](std::int64_t) { verbosity = 0; }, "No progress output");

  // split
  auto* split = app.add_subcommand("split", "Stratified train/validation/test split");
  std::string split_input, split_ratios = "0.7,0.1,0.2", split_out;
  std::uint64_t split_seed = 0;
  split->add_option("--input", split_input, "Labeled corpus file")->required()->check(CLI::ExistingFile);
  split->add_option("--ratios", split_ratios, "train,validation,test fractions")->capture_default_str();
  split->add_option("--seed", split_seed, "Shuffle seed")->capture_default_str();
  split->add_option("--out", split_out, "Output directory")->required();

  // preprocess
  auto* prep = app.add_subcommand("preprocess", "Clean the text column of a corpus file");
  std::string prep_input, prep_output;
  prep->add_option("--input", prep_input, "Corpus file")->required()->check(CLI::ExistingFile);
  prep->add_option("--output", prep_output, "Output file")->required();

  // train
  auto* tr = app.add_subcommand("train", "Train a strategy on a split directory");
  std::string train_config, train_data, train_out;
  std::optional<std::uint64_t> train_seed;
  tr->add_option("--config", train_config, "Strategy config JSON")->required()->check(CLI::ExistingFile);
  tr->add_option("--data", train_data, "Directory with train/validation files")
      ->required()
      ->check(CLI::ExistingDirectory);
  tr->add_option("--out", train_out, "Bundle output directory")->required();
  tr->add_option("--seed", train_seed, "Override the config seed");

  // eval
  auto* ev = app.add_subcommand("eval", "Evaluate a bundle on a labeled corpus");
  std::string eval_bundle, eval_data, eval_report, eval_miscls, eval_supports;
  std::size_t eval_limit = 50;
  std::optional<double> eval_threshold;
  bool eval_positive = false;
  ev->add_option("--bundle", eval_bundle, "Trained bundle directory")->required()->check(CLI::ExistingDirectory);
  ev->add_option("--data", eval_data, "Labeled corpus file")->required()->check(CLI::ExistingFile);
  ev->add_option("--report", eval_report, "Report JSON output")->required();
  auto* miscls_opt = ev->add_option("--misclassified", eval_miscls, "Misclassified posts TSV output");
  ev->add_option("--limit", eval_limit, "Rows in the misclassification table")
      ->capture_default_str()
      ->needs(miscls_opt);
  ev->add_option("--threshold", eval_threshold, "Decision threshold (default: bundle config)");
  ev->add_flag("--positive-class-f1", eval_positive, "Score dimensions by positive-class F1");
  ev->add_option("--corpus-supports", eval_supports,
                 "Corpus whose positive counts weight the combined score")
      ->check(CLI::ExistingFile);

  // predict
  auto* pr = app.add_subcommand("predict", "Score posts with a bundle");
  std::string pred_bundle, pred_data, pred_output;
  std::optional<double> pred_threshold;
  pr->add_option("--bundle", pred_bundle, "Trained bundle directory")->required()->check(CLI::ExistingDirectory);
  pr->add_option("--data", pred_data, "Corpus file (labels optional)")->required()->check(CLI::ExistingFile);
  pr->add_option("--output", pred_output, "Predictions file")->required();
  pr->add_option("--threshold", pred_threshold, "Decision threshold (default: bundle config)");

  // report
  auto* rp = app.add_subcommand("report", "Tabulate evaluation reports and corpus statistics");
  std::vector<std::string> rp_inputs, rp_names;
  std::string rp_output, rp_data, rp_stats;
  rp->add_option("--input", rp_inputs, "Report JSON (repeatable)")->check(CLI::ExistingFile);
  rp->add_option("--name", rp_names, "Row label per --input");
  rp->add_option("--output", rp_output, "Markdown table output");
  auto* rp_data_opt = rp->add_option("--data", rp_data, "Labeled corpus for label statistics")
                          ->check(CLI::ExistingFile);
  rp->add_option("--stats", rp_stats, "Label statistics JSON output")->needs(rp_data_opt);

  // synth (hidden)
  auto* sy = app.add_subcommand("synth", "Generate the keyword-rule synthetic corpus");
  sy->group("");
  SyntheticOptions synth_opt;
  std::string synth_output;
  sy->add_option("--size", synth_opt.size)->capture_default_str();
  sy->add_option("--seed", synth_opt.seed)->capture_default_str();
  sy->add_option("--hostile-rate", synth_opt.hostile_rate)->capture_default_str();
  sy->add_option("--output", synth_output)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    err << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp& e) {
    err << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kUsageError;
  }

  const Progress progress{err, verbosity};
  try {
    if (*split) {
      const auto r = parse_ratios(split_ratios);
      const Corpus corpus = read_corpus(split_input);
      const SplitBundle b = stratified_split(corpus, {r[0], r[1], r[2]}, split_seed);
      for (const auto& w : b.warnings) progress("warning: " + w);
      fs::create_directories(split_out);
      const std::string ext = fs::path(split_input).extension() == ".tsv" ? ".tsv" : ".csv";
      write_corpus(fs::path(split_out) / ("train" + ext), b.train);
      write_corpus(fs::path(split_out) / ("validation" + ext), b.validation);
      write_corpus(fs::path(split_out) / ("test" + ext), b.test);
      write_json(fs::path(split_out) / "manifest.json", split_manifest(b));
      progress("split " + std::to_string(corpus.size()) + " posts -> train " +
               std::to_string(b.train.size()) + ", validation " +
               std::to_string(b.validation.size()) + ", test " + std::to_string(b.test.size()));
    } else if (*prep) {
      csv::Table table = csv::read(prep_input);
      const int col = table.column("text");
      if (col < 0) throw DataError(prep_input + ": missing 'text' column");
      for (auto& row : table.rows)
        row[static_cast<std::size_t>(col)] = clean_text(row[static_cast<std::size_t>(col)]).value();
      // Write to a fresh string first so --output may equal --input.
      csv::write_file(prep_output, csv::format(table, csv::delimiter_for(prep_output)));
      progress("cleaned " + std::to_string(table.rows.size()) + " rows");
    } else if (*tr) {
      StrategyConfig config;
      try {
        config = read_json(train_config).get<StrategyConfig>();
      } catch (const nlohmann::json::exception& e) {
        throw DataError(train_config + ": " + e.what());
      }
      if (train_seed) config.seed = *train_seed;
      SplitBundle splits;
      splits.train = read_corpus(split_file(train_data, "train"));
      const fs::path vdir(train_data);
      if (fs::exists(vdir / "validation.csv") || fs::exists(vdir / "validation.tsv"))
        splits.validation = read_corpus(split_file(train_data, "validation"));
      splits.seed = config.seed;
      TrainingObserver observer;
      observer.log = [&](const std::string& m) { progress(m, 2); };
      progress("training " + std::string(strategy_name(config.strategy)) + " on " +
               std::to_string(splits.train.size()) + " posts");
      const TrainedBundle bundle = train(config, splits, observer);
      save_bundle(bundle, train_out);
      progress("bundle written to " + train_out);
    } else if (*ev) {
      const TrainedBundle bundle = load_bundle(eval_bundle);
      const Corpus gold = read_corpus(eval_data);
      EvaluationOptions opt;
      opt.threshold = eval_threshold.value_or(bundle.config.threshold);
      opt.mode = eval_positive ? F1Mode::kPositiveClass : F1Mode::kTwoClassWeighted;
      if (!eval_supports.empty()) opt.corpus_supports = label_stats(read_corpus(eval_supports));
      const PredictionSet preds = predict(bundle, gold, opt.threshold);
      const MetricsReport report = evaluate(preds, gold, opt);
      write_json(eval_report, to_json(report));
      if (!eval_miscls.empty())
        csv::write(eval_miscls,
                   misclassification_table(misclassification_report(preds, gold, eval_limit)));
      progress("hostile " + fmt4(report.hostile) + ", weighted fine-grained " +
               fmt4(report.weighted));
    } else if (*pr) {
      const TrainedBundle bundle = load_bundle(pred_bundle);
      const Corpus posts = read_corpus(pred_data, LabelPolicy::kOptional);
      const PredictionSet preds =
          predict(bundle, posts, pred_threshold.value_or(bundle.config.threshold));
      csv::Table t;
      t.header = {"id", "hostile"};
      for (Dimension d : kDimensions) t.header.emplace_back(dimension_name(d));
      t.header.emplace_back("labels");
      for (const auto& p : preds.posts) {
        std::vector<std::string> row = {p.id, fmt4(p.coarse_probability)};
        for (Dimension d : kDimensions) row.push_back(fmt4(p.fine_probabilities[index(d)]));
        row.push_back(p.labels.to_string());
        t.rows.push_back(std::move(row));
      }
      csv::write(pred_output, t);
      progress("scored " + std::to_string(preds.posts.size()) + " posts");
    } else if (*rp) {
      if (rp_inputs.empty() && rp_data.empty())
        throw CLI::RequiredError("--input or --data");
      if (!rp_names.empty() && rp_names.size() != rp_inputs.size())
        throw CLI::ValidationError("--name", "give one --name per --input");
      if (!rp_inputs.empty()) {
        if (rp_output.empty()) throw CLI::RequiredError("--output");
        std::string table =
            "| Method | Hostile | Defamation | Fake | Hate | Offensive | Weighted |\n"
            "|---|---|---|---|---|---|---|\n";
        for (std::size_t i = 0; i < rp_inputs.size(); ++i) {
          const MetricsReport r = report_from_json(read_json(rp_inputs[i]));
          const std::string name =
              rp_names.empty() ? fs::path(rp_inputs[i]).stem().string() : rp_names[i];
          table += "| " + name + " | " + fmt4(r.hostile) + " | " +
                   fmt4(r.f1(Dimension::kDefamation)) + " | " + fmt4(r.f1(Dimension::kFake)) +
                   " | " + fmt4(r.f1(Dimension::kHate)) + " | " +
                   fmt4(r.f1(Dimension::kOffensive)) + " | " + fmt4(r.weighted) + " |\n";
        }
        csv::write_file(rp_output, table);
      }
      if (!rp_data.empty()) {
        const LabelCounts counts = label_stats(read_corpus(rp_data));
        if (rp_stats.empty())
          progress(to_json(counts).dump(), 0);
        else
          write_json(rp_stats, to_json(counts));
      }
    } else if (*sy) {
      write_corpus(synth_output, synthetic_corpus(synth_opt));
      progress("wrote " + std::to_string(synth_opt.size) + " synthetic posts");
    }
  } catch (const CLI::Error& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kDataError;
  }
  return kOk;
}

inline int run(const std::vector<std::string>& args, std::ostream& err = std::cerr) {
  std::vector<const char*> argv = {"hostility"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), err);
}

}  // namespace hostility::cli
