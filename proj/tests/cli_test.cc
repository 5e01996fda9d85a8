// tests/cli_test.cc

// Copyright 2026 The anchoralign Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "anchoralign/dataset.h"
#include "anchoralign/segmenter.h"
#include "json.hpp"
#include "test_util.h"

namespace anchoralign {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string Slurp(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int Shell(const std::string &cmd) {
  int status = std::system((cmd + " >/dev/null 2>&1").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

// One fixture per test, built in its own temporary directory.
class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    root_ = dir_.path().string();
    ASSERT_EQ(Shell(std::string(ANCHORALIGN_FIXTURE_TOOL) + " " + root_ + " --mapping " +
                  ANCHORALIGN_DATA_DIR "/krutidev010.tsv"),
              0);
    expected_ = json::parse(Slurp(root_ + "/expected.json"));
  }

  int Cli(const std::string &args) {
    return Shell(std::string(ANCHORALIGN_CLI) + " -c " + root_ + "/config.ini " + args);
  }
  json Summary(const std::string &cmd) {
    return json::parse(Slurp(root_ + "/out/summary_" + cmd + ".json"));
  }

  testing::TempDir dir_;
  std::string root_;
  json expected_;
};

TEST_F(CliTest, AlignProcessesEverySource) {
  ASSERT_EQ(Cli("align"), 0);
  json s = Summary("align");
  EXPECT_EQ(s["sources_processed"], 3);
  EXPECT_TRUE(s["sources_failed"].empty());
  EXPECT_EQ(s["exit_code"], 0);
  for (const char *id : {"b01", "b02", "b03"}) {
    auto segs = ReadSegments(root_ + "/out/segments/" + std::string(id) + ".jsonl");
    EXPECT_EQ(segs.size(), expected_["sources"][id]["fragments"].get<std::size_t>());
    for (std::size_t k = 1; k < segs.size(); ++k)
      EXPECT_EQ(segs[k].start_s, segs[k - 1].end_s);
  }
}

TEST_F(CliTest, FilterMatchesFixture) {
  ASSERT_EQ(Cli("align"), 0);
  ASSERT_EQ(Cli("filter"), 0);
  json s = Summary("filter");
  EXPECT_EQ(s["rejected_by_reason"]["too_long"], expected_["too_long"]);
  EXPECT_EQ(s["rejected_by_reason"]["head_drop"], expected_["head_drop"]);
  EXPECT_EQ(s["rejected_by_reason"]["too_short"], expected_["too_short"]);
  EXPECT_EQ(s["kept"], expected_["kept"]);
  std::string csv = Slurp(root_ + "/out/rejections.csv");
  EXPECT_EQ(csv.rfind("source_id,index,start_s,end_s,duration_s,status,reason\n", 0), 0u);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 1 + 35);
}

TEST_F(CliTest, StatsBinsSumToKept) {
  ASSERT_EQ(Cli("align"), 0);
  ASSERT_EQ(Cli("filter"), 0);
  ASSERT_EQ(Cli("stats"), 0);
  json s = Summary("stats");
  std::size_t sum = 0;
  for (const auto &c : s["histogram"]) sum += c.get<std::size_t>();
  EXPECT_EQ(sum, expected_["kept"].get<std::size_t>());
  EXPECT_TRUE(fs::exists(root_ + "/out/stats.svg"));
}

TEST_F(CliTest, RunWritesManifests) {
  ASSERT_EQ(Cli("run"), 0);
  auto train = ReadManifest(root_ + "/out/manifest_train.jsonl");
  auto valid = ReadManifest(root_ + "/out/manifest_valid.jsonl");
  EXPECT_EQ(train.size() + valid.size(), expected_["kept"].get<std::size_t>());
  EXPECT_FALSE(train.empty());
  EXPECT_FALSE(valid.empty());
  for (const auto &e : train) {
    EXPECT_TRUE(fs::exists(root_ + "/out/" + e.audio_filepath)) << e.audio_filepath;
    EXPECT_GE(e.duration, 1.0);
    EXPECT_LE(e.duration, 15.0);
    EXPECT_FALSE(e.text.empty());
    // A source never appears on both sides.
    std::string src = fs::path(e.audio_filepath).stem().string().substr(0, 3);
    for (const auto &v : valid)
      EXPECT_NE(fs::path(v.audio_filepath).stem().string().substr(0, 3), src);
  }
}

TEST_F(CliTest, UsageErrorsExitTwo) {
  EXPECT_EQ(Cli("align --bogus"), 2);
  EXPECT_EQ(Cli("frobnicate"), 2);
  EXPECT_EQ(Shell(std::string(ANCHORALIGN_CLI) + " -c " + root_ + "/nope.ini align"), 2);
  EXPECT_EQ(Cli("--set filter.max_dur_s=abc filter"), 2);
  EXPECT_EQ(Cli("--set filter.nope=1 filter"), 2);
  EXPECT_EQ(Cli("--set filter.min_dur_s=30 filter"), 2);
  EXPECT_EQ(Shell(std::string(ANCHORALIGN_CLI) + " --help"), 0);
}

TEST_F(CliTest, MissingPreviousStageExitsTwo) {
  EXPECT_EQ(Cli("filter"), 2);
  EXPECT_EQ(Cli("manifest"), 2);
}

TEST_F(CliTest, ProcessingErrorsExitOne) {
  ASSERT_EQ(Cli("align"), 0);
  std::ofstream(root_ + "/out/segments/b01.jsonl", std::ios::app) << "{not json\n";
  EXPECT_EQ(Cli("filter"), 1);
  std::ofstream(root_ + "/bad.model") << "gamma 0.01\nC x\n";
  std::ofstream(root_ + "/emb.tsv") << "b01\t5\t1 2 3\n";
  EXPECT_EQ(Cli("classify-gender --model " + root_ + "/bad.model --embeddings " + root_ +
                "/emb.tsv"),
            1);
  EXPECT_EQ(Cli("speakers --embeddings " + root_ + "/emb.tsv"), 1);
}

TEST_F(CliTest, OverrideBeatsConfigFile) {
  ASSERT_EQ(Cli("align"), 0);
  ASSERT_EQ(Cli("--set filter.max_dur_s=100 filter"), 0);
  json s = Summary("filter");
  EXPECT_EQ(s["rejected_by_reason"]["too_long"], 0);
}

TEST_F(CliTest, CorruptSourceLeavesOthersIntact) {
  std::ofstream(root_ + "/audio/b02.wav", std::ios::trunc) << "RIFF garbage";
  EXPECT_EQ(Cli("align"), 1);
  json s = Summary("align");
  EXPECT_EQ(s["sources_processed"], 2);
  ASSERT_EQ(s["sources_failed"].size(), 1u);
  EXPECT_NE(s["sources_failed"].dump().find("b02"), std::string::npos);
  EXPECT_EQ(s["exit_code"], 1);
  EXPECT_TRUE(fs::exists(root_ + "/out/segments/b01.jsonl"));
  EXPECT_TRUE(fs::exists(root_ + "/out/segments/b03.jsonl"));
  EXPECT_FALSE(fs::exists(root_ + "/out/segments/b02.jsonl"));
}

TEST_F(CliTest, RerunIsByteIdentical) {
  ASSERT_EQ(Cli("run"), 0);
  const char *files[] = {"manifest_train.jsonl", "manifest_valid.jsonl", "stats.csv",
                         "rejections.csv", "segments/b01.jsonl", "clips/b01_5.wav"};
  std::vector<std::string> first;
  for (const char *f : files) first.push_back(Slurp(root_ + "/out/" + f));
  fs::remove_all(root_ + "/out");
  ASSERT_EQ(Cli("--set run.workers=3 run"), 0);
  for (std::size_t k = 0; k < std::size(files); ++k) {
    EXPECT_FALSE(first[k].empty()) << files[k];
    EXPECT_EQ(Slurp(root_ + "/out/" + files[k]), first[k]) << files[k];
  }
}

}  // namespace
}  // namespace anchoralign
