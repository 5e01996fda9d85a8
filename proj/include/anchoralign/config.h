// include/anchoralign/config.h

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

#ifndef ANCHORALIGN_CONFIG_H_
#define ANCHORALIGN_CONFIG_H_

#include <cstddef>
#include <string>
#include <vector>

#include "anchoralign/analytics.h"
#include "anchoralign/dataset.h"
#include "anchoralign/dtw.h"
#include "anchoralign/features.h"
#include "anchoralign/segmenter.h"
#include "anchoralign/synth.h"

namespace anchoralign {

struct PathsConfig {
  std::string audio_dir;
  std::string transcript_dir;
  std::string mapping_table;  // empty: transcripts are already Unicode
  std::string output_dir = "out";
};

struct PipelineConfig {
  PathsConfig paths;
  FeatureConfig features;
  BandConfig band;
  FilterConfig filter;
  SplitConfig split;
  SynthBackend synth;
  SvmParams svm;
  double speaker_threshold = 0.75;
  std::size_t workers = 1;
};

/// INI-style file: `[section]` headers and `key = value` lines, `;` or `#`
/// comments. Sections: paths, features, band, filter, split, synth, svm,
/// speakers, run. Unknown sections or keys are a ConfigError.
PipelineConfig LoadConfig(const std::string &path);
PipelineConfig ParseConfig(const std::string &text);

/// Applies `section.key=value`; throws ConfigError on unknown keys or values
/// that do not parse.
void ApplyOverride(PipelineConfig &cfg, const std::string &assignment);
void ApplySetting(PipelineConfig &cfg, const std::string &section,
                  const std::string &key, const std::string &value);

/// Range checks on every numeric section; throws ConfigError.
void ValidateConfig(const PipelineConfig &cfg);

/// Canonical INI text of `cfg`; ParseConfig(DumpConfig(c)) reproduces c.
std::string DumpConfig(const PipelineConfig &cfg);

}  // namespace anchoralign

#endif  // ANCHORALIGN_CONFIG_H_
