// include/anchoralign/synth.h

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

#ifndef ANCHORALIGN_SYNTH_H_
#define ANCHORALIGN_SYNTH_H_

#include <cstddef>
#include <string>
#include <vector>

#include "anchoralign/audio_io.h"
#include "anchoralign/textnorm.h"

namespace anchoralign {

/// Default command for espeak-style engines. {voice} is optional in a
/// template; {text_file} and {out_wav} are required exactly once.
inline constexpr const char *kDefaultTtsCommand =
    "espeak-ng -v {voice} -f {text_file} -w {out_wav}";

struct SynthBackend {
  enum class Kind { kExternal, kTest };

  Kind kind = Kind::kExternal;
  std::string command_template = kDefaultTtsCommand;
  std::string voice = "hi";
  double timeout_s = 60.0;

  static SynthBackend Test() {
    SynthBackend b;
    b.kind = Kind::kTest;
    return b;
  }
  static SynthBackend External(std::string command, std::string voice = "hi",
                               double timeout_s = 60.0);

  /// Throws ConfigError if an external template lacks a placeholder or
  /// repeats one.
  void Validate() const;
};

// Parameters of the built-in test synthesizer.
inline constexpr double kTestToneSeconds = 0.120;
inline constexpr double kTestRampSeconds = 0.010;
inline constexpr double kTestToneAmplitude = 0.5;

/// Frequency the test synthesizer uses for `codepoint`.
double TestToneHz(char32_t codepoint);

struct Anchor {
  std::size_t fragment_index = 0;
  double start_s = 0.0;
  double end_s = 0.0;
};

struct AnchoredSynthesis {
  AudioBuffer audio;
  std::vector<Anchor> anchors;  // contiguous, one per fragment, in order
};

/// Audio for one fragment at the pipeline rate. Throws DomainError on empty
/// text and BackendError when the external command fails.
AudioBuffer SynthesizeFragment(const std::string &text,
                               const SynthBackend &backend);

/// Concatenates per-fragment audio without padding and records cumulative
/// boundaries. Up to `workers` fragments are synthesized at once.
AnchoredSynthesis SynthesizeSequence(const std::vector<TextFragment> &fragments,
                                     const SynthBackend &backend,
                                     std::size_t workers = 1);

/// Result of running a shell command with a deadline.
struct CommandResult {
  int exit_code = -1;
  bool timed_out = false;
  std::string stderr_text;
};

CommandResult RunCommand(const std::string &command, double timeout_s);

/// Single-quotes `s` for /bin/sh.
std::string ShellQuote(const std::string &s);

}  // namespace anchoralign

#endif  // ANCHORALIGN_SYNTH_H_
