// tests/dataset_test.cc

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

#include "anchoralign/dataset.h"

#include <gtest/gtest.h>

#include <fstream>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "anchoralign/error.h"
#include "test_util.h"

namespace anchoralign {
namespace {

using testing::TempDir;

Segment Seg(const std::string &src, std::size_t idx, double dur) {
  Segment s;
  s.source_id = src;
  s.fragment_index = idx;
  s.start_s = 0.0;
  s.end_s = dur;
  s.text = "t";
  return s;
}

// `sources` sources whose segment durations add up to `hours` in total.
std::vector<Segment> Corpus(std::mt19937_64 &rng, std::size_t sources, double hours) {
  std::vector<double> weight(sources);
  for (double &w : weight) w = std::uniform_real_distribution<double>(0.5, 1.5)(rng);
  const double scale = hours * 3600.0 / std::accumulate(weight.begin(), weight.end(), 0.0);
  std::vector<Segment> out;
  for (std::size_t k = 0; k < sources; ++k) {
    double left = weight[k] * scale;
    for (std::size_t i = 0; left > 1e-9; ++i) {
      double d = std::min(left, std::uniform_real_distribution<double>(1.0, 15.0)(rng));
      out.push_back(Seg("src" + std::to_string(k), i, d));
      left -= d;
    }
  }
  return out;
}

double Total(const std::vector<Segment> &v) {
  double t = 0.0;
  for (const Segment &s : v) t += s.duration();
  return t;
}

TEST(SplitTest, TwoEqualSources) {
  std::vector<Segment> kept = {Seg("a", 0, 10), Seg("a", 1, 10), Seg("b", 0, 10),
                               Seg("b", 1, 10)};
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    DatasetSplit s = Split(kept, {0.07, seed});
    ASSERT_EQ(s.valid_sources.size(), 1u);
    EXPECT_EQ(s.valid.size(), 2u);
    EXPECT_EQ(s.train.size(), 2u);
    EXPECT_EQ(s.valid[0].source_id, s.valid_sources[0]);
  }
}

TEST(SplitTest, PartitionsBySource) {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 100; ++trial) {
    auto kept = Corpus(rng, 2 + rng() % 20, 0.2 + (rng() % 100) / 50.0);
    SplitConfig cfg{0.01 + (rng() % 45) / 100.0, rng()};
    DatasetSplit s = Split(kept, cfg);
    EXPECT_EQ(s.train.size() + s.valid.size(), kept.size());
    std::set<std::string> tr, va;
    for (const Segment &x : s.train) tr.insert(x.source_id);
    for (const Segment &x : s.valid) va.insert(x.source_id);
    for (const std::string &id : va) EXPECT_EQ(tr.count(id), 0u) << id;
    EXPECT_FALSE(tr.empty());
    EXPECT_FALSE(va.empty());
    EXPECT_EQ(std::set<std::string>(s.valid_sources.begin(), s.valid_sources.end()), va);
    // Relative order inside each side is the input order.
    std::size_t a = 0, b = 0;
    for (const Segment &x : kept) {
      const Segment &got = va.count(x.source_id) ? s.valid[b++] : s.train[a++];
      EXPECT_EQ(got.source_id, x.source_id);
      EXPECT_EQ(got.fragment_index, x.fragment_index);
    }
    EXPECT_EQ(Split(kept, cfg).valid_sources, s.valid_sources);
  }
}

TEST(SplitTest, FiftySourcesTenHours) {
  std::mt19937_64 rng(2);
  auto kept = Corpus(rng, 50, 10.0);
  std::set<std::vector<std::string>> distinct;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    DatasetSplit s = Split(kept, {0.07, seed});
    double valid_h = Total(s.valid) / 3600.0;
    EXPECT_GE(valid_h, 0.6) << seed;
    EXPECT_LE(valid_h, 0.9) << seed;
    distinct.insert(s.valid_sources);
  }
  EXPECT_GT(distinct.size(), 1u);
}

TEST(SplitTest, Errors) {
  EXPECT_THROW(Split({Seg("a", 0, 5), Seg("a", 1, 5)}, {}), DomainError);
  EXPECT_THROW(Split({}, {}), DomainError);
  EXPECT_THROW(Split({Seg("a", 0, 5), Seg("b", 0, 5)}, {0.0, 1}), ConfigError);
  EXPECT_THROW(Split({Seg("a", 0, 5), Seg("b", 0, 5)}, {0.5, 1}), ConfigError);
}

TEST(ManifestTest, SingleEntryLine) {
  TempDir dir;
  WriteManifest(dir / "m.jsonl", {{"clips/b_5.wav", 3.14159, "नमस्ते \"दुनिया\""}});
  std::ifstream in(dir / "m.jsonl");
  std::stringstream ss;
  ss << in.rdbuf();
  EXPECT_EQ(ss.str(),
            "{\"audio_filepath\":\"clips/b_5.wav\",\"duration\":3.142,"
            "\"text\":\"नमस्ते \\\"दुनिया\\\"\"}\n");
  auto back = ReadManifest(dir / "m.jsonl");
  ASSERT_EQ(back.size(), 1u);
  EXPECT_EQ(back[0].duration, 3.142);
}

TEST(ManifestTest, EmptyAndRoundTrip) {
  TempDir dir;
  WriteManifest(dir / "e.jsonl", {});
  EXPECT_EQ(std::filesystem::file_size(dir / "e.jsonl"), 0u);
  EXPECT_TRUE(ReadManifest(dir / "e.jsonl").empty());

  std::mt19937_64 rng(3);
  std::vector<ManifestEntry> es;
  const std::u32string letters = U"कखगघ ािी\"\\\t";
  for (std::size_t k = 0; k < 1000; ++k) {
    std::u32string t(1 + rng() % 30, U'क');
    for (char32_t &c : t) c = letters[rng() % letters.size()];
    std::string utf8;
    for (char32_t c : t) {
      if (c < 0x80) utf8 += static_cast<char>(c);
      else {
        utf8 += static_cast<char>(0xE0 | (c >> 12));
        utf8 += static_cast<char>(0x80 | ((c >> 6) & 0x3F));
        utf8 += static_cast<char>(0x80 | (c & 0x3F));
      }
    }
    es.push_back({"clips/s_" + std::to_string(k) + ".wav", (rng() % 15000) / 1000.0, utf8});
  }
  WriteManifest(dir / "m.jsonl", es);
  auto back = ReadManifest(dir / "m.jsonl");
  ASSERT_EQ(back.size(), es.size());
  for (std::size_t k = 0; k < es.size(); ++k) {
    EXPECT_EQ(back[k].audio_filepath, es[k].audio_filepath);
    EXPECT_EQ(back[k].duration, es[k].duration);
    EXPECT_EQ(back[k].text, es[k].text);
  }
}

TEST(ManifestTest, RejectsExtraKeys) {
  TempDir dir;
  std::ofstream(dir / "m.jsonl")
      << "{\"audio_filepath\":\"a\",\"duration\":1,\"text\":\"x\"}\n"
      << "{\"audio_filepath\":\"a\",\"duration\":1,\"text\":\"x\",\"lang\":\"hi\"}\n";
  try {
    ReadManifest(dir / "m.jsonl");
    FAIL();
  } catch (const ParseError &e) {
    EXPECT_EQ(e.line(), 2u);
  }
}

TEST(StatsTest, SmallExample) {
  DurationStats st =
      ComputeDurationStats({Seg("a", 0, 4.2), Seg("a", 1, 9.8), Seg("b", 0, 4.7)});
  ASSERT_EQ(st.histogram.size(), 15u);
  for (std::size_t k = 0; k < 15; ++k)
    EXPECT_EQ(st.histogram[k], k == 4 ? 2u : k == 9 ? 1u : 0u) << k;
  EXPECT_NEAR(st.total_s, 18.7, 1e-12);
  EXPECT_NEAR(st.per_source_s.at("a"), 14.0, 1e-12);
  EXPECT_NEAR(st.per_source_s.at("b"), 4.7, 1e-12);
  EXPECT_NEAR(st.total_hours(), 18.7 / 3600, 1e-15);
}

TEST(StatsTest, EmptyAndEdges) {
  DurationStats st = ComputeDurationStats({});
  EXPECT_EQ(st.total_s, 0.0);
  EXPECT_EQ(std::accumulate(st.histogram.begin(), st.histogram.end(), std::size_t{0}), 0u);
  st = ComputeDurationStats({Seg("a", 0, 15.0), Seg("a", 1, 1.0), Seg("a", 2, 14.999)});
  EXPECT_EQ(st.histogram[14], 2u);
  EXPECT_EQ(st.histogram[1], 1u);
}

TEST(StatsTest, ConservesCountsAndTime) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 50; ++trial) {
    auto segs = Corpus(rng, 1 + rng() % 10, 0.1);
    DurationStats st = ComputeDurationStats(segs);
    EXPECT_EQ(std::accumulate(st.histogram.begin(), st.histogram.end(), std::size_t{0}),
              segs.size());
    double per = 0.0;
    for (const auto &[id, s] : st.per_source_s) per += s;
    EXPECT_NEAR(per, st.total_s, 1e-6);
    EXPECT_NEAR(st.total_s, Total(segs), 1e-6);
  }
}

TEST(StatsTest, CsvAndSvgFiles) {
  TempDir dir;
  DurationStats st =
      ComputeDurationStats({Seg("a", 0, 4.2), Seg("a", 1, 9.8), Seg("b", 0, 4.7)});
  WriteStatsCsv(dir / "s.csv", st);
  std::ifstream in(dir / "s.csv");
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "bin_start_s,bin_end_s,count");
  std::vector<std::string> rows;
  while (std::getline(in, line)) rows.push_back(line);
  ASSERT_EQ(rows.size(), 15u);
  EXPECT_EQ(rows[4], "4,5,2");
  EXPECT_EQ(rows[9], "9,10,1");
  EXPECT_EQ(rows[0], "0,1,0");

  WriteStatsSvg(dir / "s.svg", st);
  std::ifstream svg(dir / "s.svg");
  std::stringstream ss;
  ss << svg.rdbuf();
  EXPECT_EQ(ss.str().rfind("<svg", 0), 0u);
  EXPECT_NE(ss.str().find("</svg>"), std::string::npos);
  EXPECT_NE(ss.str().find("4-5 s: 2"), std::string::npos);

  WriteGenderCsv(dir / "g.csv", 10.0 / 3600, 20.0 / 3600);
  std::ifstream g(dir / "g.csv");
  std::stringstream gs;
  gs << g.rdbuf();
  EXPECT_EQ(gs.str(), "label,hours\nmale,0.0028\nfemale,0.0056\n");
}

}  // namespace
}  // namespace anchoralign
