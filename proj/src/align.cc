// src/align.cc

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

#include "anchoralign/align.h"

#include "anchoralign/error.h"

namespace anchoralign {

namespace {

template <typename Fn>
auto Stage(const char *name, Fn &&fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const BackendError &e) {
    throw BackendError(std::string(name) + ": " + e.what(), e.diagnostics());
  } catch (const Error &e) {
    throw Error(std::string(name) + ": " + e.what());
  }
}

}  // namespace

BulletinAlignment AlignBulletin(const std::vector<TextFragment> &fragments,
                                const AudioBuffer &real_audio,
                                const SynthBackend &backend,
                                const AlignConfig &cfg) {
  if (fragments.empty()) throw DomainError("no fragments to align");
  if (real_audio.sample_rate() != kPipelineRate)
    throw DomainError("real audio must be at " + std::to_string(kPipelineRate) +
                      " Hz, got " + std::to_string(real_audio.sample_rate()));
  BulletinAlignment out;
  out.synthesis = Stage("synthesis", [&] {
    return SynthesizeSequence(fragments, backend, cfg.synth_workers);
  });
  FeatureMatrix real = Stage("features", [&] { return Mfcc(real_audio, cfg.features); });
  FeatureMatrix synth =
      Stage("features", [&] { return Mfcc(out.synthesis.audio, cfg.features); });
  out.real_frames = real.n_frames();
  out.synth_frames = synth.n_frames();
  out.path = Stage("dtw", [&] { return Dtw(real, synth, cfg.band); });
  if (!cfg.path_dump.empty()) WritePath(cfg.path_dump, out.path);

  std::vector<Anchor> mapped =
      MapAnchors(out.path, out.synthesis.anchors, cfg.features.hop_s,
                 real_audio.duration());
  out.segments.reserve(fragments.size());
  for (std::size_t k = 0; k < fragments.size(); ++k) {
    Segment s;
    s.fragment_index = fragments[k].index;
    s.source_id = fragments[k].source_id;
    s.start_s = mapped[k].start_s;
    s.end_s = mapped[k].end_s;
    s.text = fragments[k].text;
    out.segments.push_back(std::move(s));
  }
  return out;
}

}  // namespace anchoralign
