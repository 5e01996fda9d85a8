// include/anchoralign/dataset.h

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

#ifndef ANCHORALIGN_DATASET_H_
#define ANCHORALIGN_DATASET_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "anchoralign/segmenter.h"

namespace anchoralign {

struct ManifestEntry {
  std::string audio_filepath;
  double duration = 0.0;  // seconds, written with 3 decimals
  std::string text;
};

struct SplitConfig {
  double valid_fraction = 0.07;
  std::uint64_t seed = 0;

  void Validate() const;  // 0 < valid_fraction < 0.5
};

struct DatasetSplit {
  std::vector<Segment> train, valid;
  std::vector<std::string> valid_sources;  // in selection order
};

/// Holds out whole sources. Sources are shuffled with `seed`; they are taken
/// in that order while the held-out total stays below valid_fraction of all
/// audio. The source that crosses the target is the remaining one with the
/// smallest overshoot. At least one source always stays in train.
/// Throws DomainError with fewer than two sources.
DatasetSplit Split(const std::vector<Segment> &kept, const SplitConfig &cfg);

/// One JSON object per line with keys audio_filepath, duration, text.
void WriteManifest(const std::string &path,
                   const std::vector<ManifestEntry> &entries);
std::vector<ManifestEntry> ReadManifest(const std::string &path);

struct DurationStats {
  double total_s = 0.0;
  std::map<std::string, double> per_source_s;
  double bin_width_s = 1.0;
  std::vector<std::size_t> histogram;  // bin k covers [k, k+1) seconds

  double total_hours() const { return total_s / 3600.0; }
};

/// 1-second bins over [0, max_dur_s]. The last bin also takes durations at
/// or beyond its right edge so that every segment is counted.
DurationStats ComputeDurationStats(const std::vector<Segment> &segments,
                                   double max_dur_s = 15.0);

/// `bin_start_s,bin_end_s,count`
void WriteStatsCsv(const std::string &path, const DurationStats &stats);
/// Minimal bar chart of the histogram.
void WriteStatsSvg(const std::string &path, const DurationStats &stats);
/// `label,hours`
void WriteGenderCsv(const std::string &path, double male_hours,
                    double female_hours);

}  // namespace anchoralign

#endif  // ANCHORALIGN_DATASET_H_
