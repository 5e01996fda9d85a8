// include/anchoralign/align.h

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

#ifndef ANCHORALIGN_ALIGN_H_
#define ANCHORALIGN_ALIGN_H_

#include <cstddef>
#include <string>
#include <vector>

#include "anchoralign/dtw.h"
#include "anchoralign/features.h"
#include "anchoralign/segmenter.h"
#include "anchoralign/synth.h"
#include "anchoralign/textnorm.h"

namespace anchoralign {

struct AlignConfig {
  FeatureConfig features;
  BandConfig band;
  std::size_t synth_workers = 1;
  std::string path_dump;  // when non-empty, WritePath() target
};

struct BulletinAlignment {
  std::vector<Segment> segments;  // one per fragment, ordered, contiguous
  AnchoredSynthesis synthesis;
  WarpPath path;
  std::size_t real_frames = 0;
  std::size_t synth_frames = 0;
};

/// Synthesizes the fragments, extracts MFCCs from both signals, runs banded
/// DTW and maps the synthetic anchors onto `real_audio`. Every segment lies
/// in [0, real duration]. Errors carry the failing stage as a prefix
/// ("synthesis: ", "features: ", "dtw: ").
BulletinAlignment AlignBulletin(const std::vector<TextFragment> &fragments,
                                const AudioBuffer &real_audio,
                                const SynthBackend &backend,
                                const AlignConfig &cfg);

}  // namespace anchoralign

#endif  // ANCHORALIGN_ALIGN_H_
