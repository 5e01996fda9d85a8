// tests/synth_test.cc

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

#include "anchoralign/synth.h"

#include <gtest/gtest.h>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <random>

#include "anchoralign/error.h"
#include "anchoralign/textnorm.h"

namespace anchoralign {
namespace {

std::vector<TextFragment> Fragments(const std::vector<std::string> &texts) {
  std::vector<TextFragment> out;
  for (std::size_t k = 0; k < texts.size(); ++k)
    out.push_back({k, texts[k], texts[k], "s"});
  return out;
}

std::string Fake(const std::string &flags = "") {
  return ShellQuote(ANCHORALIGN_FAKE_TTS) + " " + flags + " {text_file} {out_wav}";
}

TEST(TestSynthTest, OneCodepointIs120Ms) {
  AudioBuffer a = SynthesizeFragment("क", SynthBackend::Test());
  EXPECT_EQ(a.size(), 1920u);
  EXPECT_EQ(a.sample_rate(), kPipelineRate);
  EXPECT_DOUBLE_EQ(a.duration(), 0.120);
}

TEST(TestSynthTest, Concatenative) {
  AudioBuffer k = SynthesizeFragment("क", SynthBackend::Test());
  AudioBuffer kk = SynthesizeFragment("कख", SynthBackend::Test());
  EXPECT_DOUBLE_EQ(kk.duration(), 0.240);
  for (std::size_t n = 0; n < k.size(); ++n) ASSERT_EQ(kk.samples()[n], k.samples()[n]);
}

TEST(TestSynthTest, ToneShape) {
  EXPECT_DOUBLE_EQ(TestToneHz(U'क'), 200.0 + (0x915 % 64) * 25.0);
  EXPECT_DOUBLE_EQ(TestToneHz(0x40), 200.0);
  AudioBuffer a = SynthesizeFragment("क", SynthBackend::Test());
  EXPECT_EQ(a.samples().front(), 0.0f);
  float peak = 0.0f;
  for (float x : a.samples()) peak = std::max(peak, std::abs(x));
  EXPECT_LE(peak, 0.5f);
  EXPECT_GT(peak, 0.45f);
  EXPECT_THROW(SynthesizeFragment("", SynthBackend::Test()), DomainError);
}

TEST(SequenceTest, AnchorsOfTwoFragments) {
  AnchoredSynthesis s = SynthesizeSequence(Fragments({"क", "खग"}), SynthBackend::Test());
  ASSERT_EQ(s.anchors.size(), 2u);
  EXPECT_EQ(s.anchors[0].fragment_index, 0u);
  EXPECT_DOUBLE_EQ(s.anchors[0].start_s, 0.0);
  EXPECT_DOUBLE_EQ(s.anchors[0].end_s, 0.12);
  EXPECT_DOUBLE_EQ(s.anchors[1].start_s, 0.12);
  EXPECT_DOUBLE_EQ(s.anchors[1].end_s, 0.36);
  EXPECT_DOUBLE_EQ(s.audio.duration(), 0.36);
}

TEST(SequenceTest, SingleFragmentSpansAll) {
  AnchoredSynthesis s = SynthesizeSequence(Fragments({"नमस्ते"}), SynthBackend::Test());
  ASSERT_EQ(s.anchors.size(), 1u);
  EXPECT_EQ(s.anchors[0].start_s, 0.0);
  EXPECT_EQ(s.anchors[0].end_s, s.audio.duration());
  EXPECT_THROW(SynthesizeSequence({}, SynthBackend::Test()), DomainError);
}

TEST(SequenceTest, RandomCorporaAreContiguousAndDeterministic) {
  std::mt19937_64 rng(8);
  const std::u32string letters = U"कखगघचछजझटठडढतथदधनपफबभमयरलवशसह ािीुूेैोौ्।";
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<std::string> texts;
    double total = 0.0;
    for (int k = 0; k < 20; ++k) {
      std::u32string t(1 + rng() % 25, U'क');
      for (char32_t &c : t) c = letters[rng() % letters.size()];
      texts.push_back(CodepointsToUtf8(t));
      total += SynthesizeFragment(texts.back(), SynthBackend::Test()).duration();
    }
    AnchoredSynthesis a = SynthesizeSequence(Fragments(texts), SynthBackend::Test(), 1);
    AnchoredSynthesis b = SynthesizeSequence(Fragments(texts), SynthBackend::Test(), 4);
    EXPECT_EQ(a.audio.samples(), b.audio.samples());
    ASSERT_EQ(a.anchors.size(), 20u);
    EXPECT_EQ(a.anchors.front().start_s, 0.0);
    for (std::size_t k = 1; k < 20; ++k) {
      EXPECT_EQ(a.anchors[k].start_s, a.anchors[k - 1].end_s);
      EXPECT_EQ(a.anchors[k].fragment_index, k);
      EXPECT_EQ(b.anchors[k].start_s, a.anchors[k].start_s);
    }
    EXPECT_EQ(a.anchors.back().end_s, a.audio.duration());
    EXPECT_NEAR(a.anchors.back().end_s, total, 1.0 / kPipelineRate);
  }
}

TEST(BackendTest, TemplateValidation) {
  EXPECT_NO_THROW(SynthBackend::External("tts {text_file} {out_wav}"));
  EXPECT_THROW(SynthBackend::External("tts {text_file}"), ConfigError);
  EXPECT_THROW(SynthBackend::External("tts {out_wav}"), ConfigError);
  EXPECT_THROW(SynthBackend::External("tts {text_file} {text_file} {out_wav}"),
               ConfigError);
  EXPECT_THROW(SynthBackend::External("tts {text_file} {out_wav}", "hi", 0.0),
               ConfigError);
  EXPECT_NO_THROW(SynthBackend::External(kDefaultTtsCommand));
  EXPECT_NO_THROW(SynthBackend::Test().Validate());
}

TEST(BackendTest, ExternalOutputIsResampled) {
  SynthBackend b = SynthBackend::External(Fake("--rate 22050"));
  AudioBuffer a = SynthesizeFragment("abcd", b);
  EXPECT_EQ(a.sample_rate(), kPipelineRate);
  // 4 bytes x 80 ms, as written at 22050 Hz.
  EXPECT_NEAR(a.duration(), 4 * std::floor(0.08 * 22050) / 22050, 1.0 / kPipelineRate);
  AnchoredSynthesis s = SynthesizeSequence(Fragments({"ab", "क"}), b, 2);
  EXPECT_NEAR(s.anchors[1].start_s, 2 * 0.08, 2e-3);
  EXPECT_NEAR(s.anchors[1].end_s - s.anchors[1].start_s, 3 * 0.08, 2e-3);
}

TEST(BackendTest, NonZeroExitCarriesStderr) {
  SynthBackend b = SynthBackend::External(Fake("--fail"));
  try {
    SynthesizeFragment("क", b);
    FAIL();
  } catch (const BackendError &e) {
    EXPECT_NE(std::string(e.what()).find("status 3"), std::string::npos);
    EXPECT_NE(e.diagnostics().find("voice not installed"), std::string::npos);
  }
}

TEST(BackendTest, SequenceNamesFailingFragment) {
  SynthBackend b = SynthBackend::External(Fake("--fail"));
  try {
    SynthesizeSequence(Fragments({"क", "ख"}), b);
    FAIL();
  } catch (const BackendError &e) {
    EXPECT_NE(std::string(e.what()).find("fragment 0"), std::string::npos);
  }
}

TEST(BackendTest, UnreadableOutput) {
  EXPECT_THROW(SynthesizeFragment("क", SynthBackend::External(Fake("--garbage"))),
               BackendError);
}

TEST(BackendTest, TimeoutKillsCommand) {
  SynthBackend b = SynthBackend::External(Fake("--sleep 20"), "hi", 0.3);
  auto t0 = std::chrono::steady_clock::now();
  try {
    SynthesizeFragment("क", b);
    FAIL();
  } catch (const BackendError &e) {
    EXPECT_NE(std::string(e.what()).find("timed out"), std::string::npos);
  }
  EXPECT_LT(std::chrono::steady_clock::now() - t0, std::chrono::seconds(5));
}

TEST(BackendTest, EspeakIfInstalled) {
  if (std::system("command -v espeak-ng >/dev/null 2>&1") != 0)
    GTEST_SKIP() << "espeak-ng not installed";
  AudioBuffer a = SynthesizeFragment("नमस्ते", SynthBackend::External(kDefaultTtsCommand));
  EXPECT_GT(a.duration(), 0.1);
}

TEST(CommandTest, ExitCodeAndQuoting) {
  CommandResult r = RunCommand("echo oops >&2; exit 7", 5.0);
  EXPECT_EQ(r.exit_code, 7);
  EXPECT_FALSE(r.timed_out);
  EXPECT_EQ(r.stderr_text, "oops\n");
  std::string tricky = "it's a \"test\" $HOME `x`";
  EXPECT_EQ(RunCommand("test " + ShellQuote(tricky) + " = 'it'\\''s a \"test\" $HOME `x`'", 5.0)
                .exit_code,
            0);
}

}  // namespace
}  // namespace anchoralign
