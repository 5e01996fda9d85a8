// include/anchoralign/pipeline.h

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

#ifndef ANCHORALIGN_PIPELINE_H_
#define ANCHORALIGN_PIPELINE_H_

#include <string>
#include <vector>

#include "anchoralign/config.h"
#include "json.hpp"

namespace anchoralign {

// Every stage reads and writes under paths.output_dir:
//   fragments/<id>.tsv     decode-text: index<TAB>text
//   segments/<id>.jsonl    align: one segment per fragment
//   filtered/<id>.jsonl    filter: statuses assigned
//   rejections.csv         filter: all segments with status and reason
//   clips/<id>_<n>.wav     cut: kept segments, PCM-16 mono 16 kHz
//   manifest_{train,valid}.jsonl, stats.csv, stats.svg, gender.csv,
//   predictions.tsv, speakers.tsv, summary_<command>.json
// Manifest paths are relative to output_dir.

struct StageResult {
  nlohmann::ordered_json summary = nlohmann::ordered_json::object();
  bool ok = true;  // false when any source failed
};

StageResult DecodeTexts(const PipelineConfig &cfg);
StageResult AlignAll(const PipelineConfig &cfg);
StageResult FilterAll(const PipelineConfig &cfg);
StageResult CutAll(const PipelineConfig &cfg);
StageResult BuildManifests(const PipelineConfig &cfg);
StageResult ComputeStats(const PipelineConfig &cfg);
/// align, filter, cut, manifest and stats in sequence.
StageResult RunPipeline(const PipelineConfig &cfg);

StageResult TrainGender(const PipelineConfig &cfg,
                        const std::string &embeddings_path,
                        const std::string &labels_path,
                        const std::string &model_path);
StageResult ClassifyGender(const PipelineConfig &cfg,
                           const std::string &model_path,
                           const std::string &embeddings_path);
StageResult EstimateSpeakerCount(const PipelineConfig &cfg,
                                 const std::string &embeddings_path);

/// Writes summary_<command>.json under the output directory.
void WriteSummary(const PipelineConfig &cfg, const std::string &command,
                  const nlohmann::ordered_json &summary);

/// Source ids: transcript basenames (`*.txt`), sorted. When `need_audio`,
/// every transcript must have `<audio_dir>/<id>.wav` and vice versa;
/// a mismatch is a ConfigError.
std::vector<std::string> DiscoverSources(const PipelineConfig &cfg,
                                         bool need_audio);

}  // namespace anchoralign

#endif  // ANCHORALIGN_PIPELINE_H_
