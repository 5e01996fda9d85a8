// include/anchoralign/segmenter.h

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

#ifndef ANCHORALIGN_SEGMENTER_H_
#define ANCHORALIGN_SEGMENTER_H_

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "anchoralign/audio_io.h"

namespace anchoralign {

enum class SegmentStatus { kKept, kRejected };

// Declared in precedence order: an earlier reason wins.
enum class RejectReason { kNone, kHeadDrop, kTooLong, kTooShort, kEmptyText };

const char *StatusName(SegmentStatus s);
const char *ReasonName(RejectReason r);
SegmentStatus ParseStatus(const std::string &s);
RejectReason ParseReason(const std::string &s);

struct Segment {
  std::size_t fragment_index = 0;
  std::string source_id;
  double start_s = 0.0;
  double end_s = 0.0;
  std::string text;
  SegmentStatus status = SegmentStatus::kKept;
  RejectReason reason = RejectReason::kNone;

  double duration() const { return end_s - start_s; }
  bool kept() const { return status == SegmentStatus::kKept; }
};

struct FilterConfig {
  std::size_t drop_head = 5;
  double max_dur_s = 15.0;
  double min_dur_s = 1.0;
  bool require_nonempty_text = true;

  void Validate() const;  // throws ConfigError
};

/// Assigns statuses without removing anything. Rules, in precedence order:
///   fragment_index < drop_head        -> head_drop
///   duration > max_dur_s              -> too_long
///   duration < min_dur_s or <= 0      -> too_short
///   text empty (when required)        -> empty_text
/// Segments of one source must appear with strictly increasing
/// fragment_index; sources may interleave. Throws DomainError otherwise.
std::vector<Segment> ApplyFilters(std::vector<Segment> segments,
                                  const FilterConfig &cfg);

/// Writes `<source_id>_<index>.wav` (PCM-16 mono at the buffer's rate) for
/// each kept segment and returns the paths in input order. Rejected
/// segments are skipped. Throws BoundsError naming a segment that does not
/// fit inside `audio`, IoError when out_dir cannot be written.
std::vector<std::string> CutSegments(const AudioBuffer &audio,
                                     const std::vector<Segment> &segments,
                                     const std::string &out_dir);

std::string SegmentFileName(const Segment &s);

/// CSV: source_id,index,start_s,end_s,duration_s,status,reason
void WriteRejectionReport(std::ostream &out, const std::vector<Segment> &segs);
void WriteRejectionReport(const std::string &path,
                          const std::vector<Segment> &segs);

/// JSON-lines interchange between pipeline stages, one segment per line.
void WriteSegments(const std::string &path, const std::vector<Segment> &segs);
std::vector<Segment> ReadSegments(const std::string &path);

}  // namespace anchoralign

#endif  // ANCHORALIGN_SEGMENTER_H_
