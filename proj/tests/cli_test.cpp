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

#include <filesystem>
#include <sstream>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "cli.hpp"
#include "desk_run.hpp"

namespace hostility {
namespace {

namespace fs = std::filesystem;

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("hostility_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  int run(std::vector<std::string> args) {
    err_.str("");
    return cli::run(args, err_);
  }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
  std::ostringstream err_;
};

TEST_F(Cli, UnknownSubcommandIsUsageError) {
  EXPECT_EQ(run({"frobnicate"}), 2);
  EXPECT_EQ(run({}), 2);
}

TEST_F(Cli, MissingInputNamesFlag) {
  EXPECT_EQ(run({"split", "--input", path("nope.csv"), "--out", path("s")}), 2);
  EXPECT_NE(err_.str().find("--input"), std::string::npos);
}

TEST_F(Cli, MalformedCorpusIsDataError) {
  csv::write_file(path("bad.csv"), "id,text,labels\n1,hello,sarcastic\n");
  EXPECT_EQ(run({"split", "--input", path("bad.csv"), "--out", path("s")}), 1);
  EXPECT_NE(err_.str().find("sarcastic"), std::string::npos);
}

TEST_F(Cli, SplitWritesFilesAndManifest) {
  ASSERT_EQ(run({"synth", "--size", "200", "--output", path("c.tsv")}), 0);
  ASSERT_EQ(run({"split", "--input", path("c.tsv"), "--seed", "9", "--out", path("s")}), 0);
  std::size_t total = 0;
  for (const char* name : {"train.tsv", "validation.tsv", "test.tsv"}) {
    ASSERT_TRUE(fs::exists(dir_ / "s" / name)) << name;
    total += read_corpus((dir_ / "s" / name).string()).size();
  }
  EXPECT_EQ(total, 200u);
  const auto manifest = nlohmann::json::parse(csv::read_file(dir_ / "s" / "manifest.json"));
  EXPECT_EQ(manifest["seed"], 9);
  EXPECT_EQ(manifest["counts"]["train"], 140);
  EXPECT_EQ(manifest["counts"]["validation"], 20);
  EXPECT_EQ(manifest["counts"]["test"], 40);
}

TEST_F(Cli, BadRatiosRejected) {
  ASSERT_EQ(run({"synth", "--size", "50", "--output", path("c.csv")}), 0);
  EXPECT_NE(run({"split", "--input", path("c.csv"), "--ratios", "0.5,0.5,0.5", "--out", path("s")}), 0);
}

TEST_F(Cli, PreprocessCleansOnlyText) {
  csv::write_file(path("in.csv"),
                  "id,text,labels\np1,\"@user भारत महान है! #proud\",non-hostile\n"
                  "p2,देखो https://bit.ly/abc,\"fake,hate\"\n");
  ASSERT_EQ(run({"preprocess", "--input", path("in.csv"), "--output", path("out.csv")}), 0);
  const auto t = csv::read(path("out.csv"));
  ASSERT_EQ(t.rows.size(), 2u);
  EXPECT_EQ(t.rows[0], (std::vector<std::string>{"p1", "भारत महान है", "non-hostile"}));
  EXPECT_EQ(t.rows[1], (std::vector<std::string>{"p2", "देखो http", "fake,hate"}));
}

TEST_F(Cli, ReportTabulatesAndCountsLabels) {
  ASSERT_EQ(run({"synth", "--size", "60", "--output", path("c.csv")}), 0);
  const nlohmann::json rep = {{"hostile", 0.9},   {"defamation", 0.1}, {"fake", 0.2},
                              {"hate", 0.3},      {"offensive", 0.4},  {"weighted", 0.25}};
  csv::write_file(path("r.json"), rep.dump());
  ASSERT_EQ(run({"report", "--input", path("r.json"), "--name", "AUX tiny", "--output",
                 path("t.md"), "--data", path("c.csv"), "--stats", path("stats.json")}),
            0);
  const std::string md = csv::read_file(path("t.md"));
  EXPECT_NE(md.find("| AUX tiny | 0.9000 | 0.1000 | 0.2000 | 0.3000 | 0.4000 | 0.2500 |"),
            std::string::npos);
  const auto stats = nlohmann::json::parse(csv::read_file(path("stats.json")));
  EXPECT_EQ(stats["total"], 60);
}

TEST_F(Cli, TrainEvalPredictPipelineIsReproducible) {
  ASSERT_EQ(run({"synth", "--output", path("corpus.csv")}), 0);
  csv::write_file(path("config.json"), nlohmann::json(desk::config(Strategy::kAux)).dump(2));
  const std::string corpus_before = csv::read_file(path("corpus.csv"));

  std::vector<std::string> reports;
  for (const std::string tag : {"a", "b"}) {
    const std::string splits = path("splits_" + tag);
    ASSERT_EQ(run({"-q", "split", "--input", path("corpus.csv"), "--seed", "42", "--out", splits}), 0);
    for (const char* name : {"train.csv", "validation.csv", "test.csv"})
      ASSERT_EQ(run({"-q", "preprocess", "--input", splits + "/" + name, "--output", splits + "/" + name}), 0);
    ASSERT_EQ(run({"-q", "train", "--config", path("config.json"), "--data", splits, "--out",
                   path("bundle_" + tag)}),
              0)
        << err_.str();
    const std::string test_before = csv::read_file(splits + "/test.csv");
    ASSERT_EQ(run({"-q", "eval", "--bundle", path("bundle_" + tag), "--data", splits + "/test.csv",
                   "--report", path("report_" + tag + ".json"), "--misclassified",
                   path("miss_" + tag + ".tsv"), "--limit", "5"}),
              0)
        << err_.str();
    EXPECT_EQ(csv::read_file(splits + "/test.csv"), test_before);
    reports.push_back(csv::read_file(path("report_" + tag + ".json")));
  }
  EXPECT_EQ(reports[0], reports[1]);
  EXPECT_EQ(csv::read_file(path("corpus.csv")), corpus_before);

  const auto report = nlohmann::json::parse(reports[0]);
  EXPECT_GE(report["hostile"].get<double>(), 0.95);
  EXPECT_TRUE(fs::exists(dir_ / "bundle_a" / "metadata.json"));
  EXPECT_TRUE(fs::exists(dir_ / "bundle_a" / "tensors.bin"));
  EXPECT_TRUE(fs::exists(dir_ / "bundle_a" / "history.jsonl"));
  EXPECT_LE(csv::read(path("miss_a.tsv")).rows.size(), 5u);

  // Unlabeled input is accepted by predict.
  csv::Table unlabeled = csv::read(path("splits_a/test.csv"));
  unlabeled.header.pop_back();
  for (auto& row : unlabeled.rows) row.pop_back();
  csv::write(path("unlabeled.csv"), unlabeled);
  ASSERT_EQ(run({"predict", "--bundle", path("bundle_a"), "--data", path("unlabeled.csv"), "--output",
                 path("pred.csv")}),
            0)
      << err_.str();
  const auto preds = csv::read(path("pred.csv"));
  EXPECT_EQ(preds.header, (std::vector<std::string>{"id", "hostile", "fake", "hate", "offensive",
                                                    "defamation", "labels"}));
  EXPECT_EQ(preds.rows.size(), unlabeled.rows.size());
}

}  // namespace
}  // namespace hostility
