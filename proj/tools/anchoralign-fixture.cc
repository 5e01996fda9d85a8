// tools/anchoralign-fixture.cc

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

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "anchoralign/audio_io.h"
#include "anchoralign/fileutil.h"
#include "anchoralign/synth.h"
#include "anchoralign/textnorm.h"
#include "json.hpp"

namespace fs = std::filesystem;
using namespace anchoralign;

namespace {

// KrutiDev spellings of everyday bulletin words.
const char *const kWords[] = {
    "Hkkjr", "fgUnh",  "dk;Z",  "lekpkj", "ljdkj", "ns'k",  "jkT;",
    "ea=h",  "yksx",   "fnYyh", "ckr",    "dke",   "ikuh",  "fdlku",
    "[kcj",  "iqfyl",  "ekSle", "ckfj'k", "vkt",   "dy",    "'kgj",
};

// Tokens a typesetter leaves behind; dropped by script filtering.
const char *const kNoise[] = {"2024", "$", "10", "@@"};

struct BulletinPlan {
  std::string id;
  double lead_silence_s;
  // Target decoded length of each fragment, in codepoints.
  std::vector<std::size_t> lengths;
};

std::vector<BulletinPlan> Plans() {
  // Lengths are in 120 ms test tones: 125 codepoints is 15 s, 8 is 0.96 s.
  return {
      {"b01", 1.5, {30, 40, 28, 35, 45, 40, 150, 55, 60, 33, 48, 40}},
      {"b02", 0.5, {38, 25, 33, 42, 30, 50, 6, 44, 160, 36, 140, 29, 52, 41}},
      {"b03", 2.0, {26, 34, 45, 31, 39, 47, 58, 35, 40}},
  };
}

// Appends words until the decoded fragment reaches about `target` codepoints.
std::string MakeFragment(std::size_t target, const MappingTable &table,
                         std::mt19937_64 &rng) {
  std::string legacy;
  std::uniform_int_distribution<std::size_t> pick(0, std::size(kWords) - 1);
  std::bernoulli_distribution noisy(0.08);
  std::size_t have = 0;
  while (true) {
    std::string word = kWords[pick(rng)];
    std::size_t n = Utf8ToCodepoints(DecodeLegacy(word, table).text).size();
    if (have > 0 && have + 1 + n + 1 > target) break;
    if (have > 0) legacy += ' ', ++have;
    legacy += word;
    have += n;
    if (have + 2 > target) break;
    if (noisy(rng)) legacy += std::string(" ") + kNoise[rng() % std::size(kNoise)];
  }
  return legacy + "A";
}

}  // namespace

int main(int argc, char *argv[]) {
  CLI::App app{
      "Writes a three-bulletin synthetic corpus: KrutiDev transcripts, audio\n"
      "rendered with the test synthesizer, a config and the expected filter\n"
      "counts.\n"};
  std::string out_dir, table_path;
  std::uint64_t seed = 7;
  app.add_option("out_dir", out_dir, "Fixture directory")->required();
  app.add_option("--mapping", table_path, "KrutiDev mapping table")
      ->required()
      ->check(CLI::ExistingFile);
  app.add_option("--seed", seed, "Word-choice seed");
  CLI11_PARSE(app, argc, argv);

  try {
    const MappingTable table = LoadMapping(table_path);
    const fs::path root = fs::absolute(out_dir);
    fs::create_directories(root / "audio");
    fs::create_directories(root / "transcripts");

    std::mt19937_64 rng(seed);
    const double min_dur = 1.0, max_dur = 15.0;
    const std::size_t drop_head = 5;
    nlohmann::ordered_json expected;
    std::size_t tot_long = 0, tot_short = 0, tot_kept = 0, tot_head = 0;

    for (const BulletinPlan &plan : Plans()) {
      std::string transcript = "2024\n";
      for (std::size_t len : plan.lengths)
        transcript += MakeFragment(len, table, rng) + " ";
      transcript += "\n";
      {
        std::ofstream f(root / "transcripts" / (plan.id + ".txt"), std::ios::binary);
        f << transcript;
      }

      auto frags = NormalizeTranscript(transcript, &table, plan.id);
      AnchoredSynthesis syn = SynthesizeSequence(frags, SynthBackend::Test(), 1);

      const std::size_t lead = static_cast<std::size_t>(plan.lead_silence_s * kPipelineRate);
      const std::size_t tail = kPipelineRate / 4;
      std::vector<float> pcm(lead + syn.audio.size() + tail, 0.0f);
      std::copy(syn.audio.samples().begin(), syn.audio.samples().end(),
                pcm.begin() + lead);
      std::normal_distribution<float> hiss(0.0f, 0.002f);
      for (float &x : pcm) x += hiss(rng);
      WriteWav((root / "audio" / (plan.id + ".wav")).string(),
               AudioBuffer(std::move(pcm), kPipelineRate));

      std::size_t n_long = 0, n_short = 0, n_kept = 0, n_head = 0;
      for (const Anchor &a : syn.anchors) {
        const double d = a.end_s - a.start_s;
        if (a.fragment_index < drop_head) ++n_head;
        else if (d > max_dur) ++n_long;
        else if (d < min_dur) ++n_short;
        else ++n_kept;
      }
      expected["sources"][plan.id] = {{"fragments", frags.size()},
                                      {"head_drop", n_head},
                                      {"too_long", n_long},
                                      {"too_short", n_short},
                                      {"kept", n_kept}};
      tot_long += n_long;
      tot_short += n_short;
      tot_kept += n_kept;
      tot_head += n_head;
    }
    expected["head_drop"] = tot_head;
    expected["too_long"] = tot_long;
    expected["too_short"] = tot_short;
    expected["kept"] = tot_kept;
    {
      std::ofstream f(root / "expected.json");
      f << expected.dump(2) << '\n';
    }
    {
      std::ofstream f(root / "config.ini");
      f << "# Synthetic three-bulletin fixture.\n"
        << "[paths]\n"
        << "audio_dir = " << (root / "audio").string() << '\n'
        << "transcript_dir = " << (root / "transcripts").string() << '\n'
        << "mapping_table = " << fs::absolute(table_path).string() << '\n'
        << "output_dir = " << (root / "out").string() << "\n\n"
        << "[synth]\n"
        << "kind = test\n\n"
        << "[filter]\n"
        << "drop_head = " << drop_head << '\n'
        << "max_dur_s = " << max_dur << '\n'
        << "min_dur_s = " << min_dur << "\n\n"
        << "[split]\n"
        << "valid_fraction = 0.2\n"
        << "seed = 11\n";
    }
    std::cout << expected.dump(2) << std::endl;
  } catch (const std::exception &e) {
    std::cerr << "anchoralign-fixture: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
