// src/segmenter.cc

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

#include "anchoralign/segmenter.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>

#include "anchoralign/error.h"
#include "anchoralign/fileutil.h"
#include "json.hpp"

namespace anchoralign {

namespace fs = std::filesystem;

const char *StatusName(SegmentStatus s) {
  return s == SegmentStatus::kKept ? "kept" : "rejected";
}

const char *ReasonName(RejectReason r) {
  switch (r) {
    case RejectReason::kNone: return "none";
    case RejectReason::kHeadDrop: return "head_drop";
    case RejectReason::kTooLong: return "too_long";
    case RejectReason::kTooShort: return "too_short";
    case RejectReason::kEmptyText: return "empty_text";
  }
  return "none";
}

SegmentStatus ParseStatus(const std::string &s) {
  if (s == "kept") return SegmentStatus::kKept;
  if (s == "rejected") return SegmentStatus::kRejected;
  throw DomainError("unknown segment status '" + s + "'");
}

RejectReason ParseReason(const std::string &s) {
  for (RejectReason r : {RejectReason::kNone, RejectReason::kHeadDrop,
                         RejectReason::kTooLong, RejectReason::kTooShort,
                         RejectReason::kEmptyText})
    if (s == ReasonName(r)) return r;
  throw DomainError("unknown reject reason '" + s + "'");
}

void FilterConfig::Validate() const {
  if (!(min_dur_s >= 0.0) || !(min_dur_s < max_dur_s))
    throw ConfigError("need 0 <= min_dur_s < max_dur_s");
}

std::vector<Segment> ApplyFilters(std::vector<Segment> segments,
                                  const FilterConfig &cfg) {
  cfg.Validate();
  std::map<std::string, std::size_t> last_index;
  for (const Segment &s : segments) {
    auto it = last_index.find(s.source_id);
    if (it != last_index.end() && s.fragment_index <= it->second)
      throw DomainError("segments of source '" + s.source_id +
                        "' are not ordered by fragment index (" +
                        std::to_string(s.fragment_index) + " after " +
                        std::to_string(it->second) + ")");
    last_index[s.source_id] = s.fragment_index;
  }
  for (Segment &s : segments) {
    const double d = s.duration();
    RejectReason r = RejectReason::kNone;
    if (s.fragment_index < cfg.drop_head)
      r = RejectReason::kHeadDrop;
    else if (d > cfg.max_dur_s)
      r = RejectReason::kTooLong;
    else if (d < cfg.min_dur_s || d <= 0.0)
      r = RejectReason::kTooShort;
    else if (cfg.require_nonempty_text && s.text.empty())
      r = RejectReason::kEmptyText;
    s.reason = r;
    s.status = r == RejectReason::kNone ? SegmentStatus::kKept
                                        : SegmentStatus::kRejected;
  }
  return segments;
}

std::string SegmentFileName(const Segment &s) {
  return s.source_id + "_" + std::to_string(s.fragment_index) + ".wav";
}

std::vector<std::string> CutSegments(const AudioBuffer &audio,
                                     const std::vector<Segment> &segments,
                                     const std::string &out_dir) {
  std::vector<std::string> written;
  bool any = false;
  for (const Segment &s : segments) any = any || s.kept();
  if (!any) return written;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create '" + out_dir + "': " + ec.message());
  for (const Segment &s : segments) {
    if (!s.kept()) continue;
    AudioBuffer clip;
    try {
      clip = Slice(audio, s.start_s, s.end_s);
    } catch (const BoundsError &e) {
      throw BoundsError("segment " + s.source_id + "#" +
                        std::to_string(s.fragment_index) + ": " + e.what());
    }
    if (clip.sample_rate() != kPipelineRate) clip = Resample(clip, kPipelineRate);
    std::string path = (fs::path(out_dir) / SegmentFileName(s)).string();
    WriteWav(path, clip);
    written.push_back(std::move(path));
  }
  return written;
}

void WriteRejectionReport(std::ostream &out, const std::vector<Segment> &segs) {
  out << "source_id,index,start_s,end_s,duration_s,status,reason\n";
  char buf[128];
  for (const Segment &s : segs) {
    std::snprintf(buf, sizeof buf, "%.3f,%.3f,%.3f", s.start_s, s.end_s,
                  s.duration());
    out << CsvField(s.source_id) << ',' << s.fragment_index << ',' << buf << ','
        << StatusName(s.status) << ',' << ReasonName(s.reason) << '\n';
  }
}

void WriteRejectionReport(const std::string &path,
                          const std::vector<Segment> &segs) {
  AtomicFile f(path);
  WriteRejectionReport(f.stream(), segs);
  f.Commit();
}

void WriteSegments(const std::string &path, const std::vector<Segment> &segs) {
  AtomicFile f(path);
  for (const Segment &s : segs) {
    nlohmann::ordered_json j;
    j["source_id"] = s.source_id;
    j["index"] = s.fragment_index;
    j["start_s"] = s.start_s;
    j["end_s"] = s.end_s;
    j["text"] = s.text;
    j["status"] = StatusName(s.status);
    j["reason"] = ReasonName(s.reason);
    f.stream() << j.dump() << '\n';
  }
  f.Commit();
}

std::vector<Segment> ReadSegments(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::vector<Segment> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      auto j = nlohmann::json::parse(line);
      Segment s;
      s.source_id = j.at("source_id").get<std::string>();
      s.fragment_index = j.at("index").get<std::size_t>();
      s.start_s = j.at("start_s").get<double>();
      s.end_s = j.at("end_s").get<double>();
      s.text = j.at("text").get<std::string>();
      s.status = ParseStatus(j.value("status", std::string("kept")));
      s.reason = ParseReason(j.value("reason", std::string("none")));
      out.push_back(std::move(s));
    } catch (const nlohmann::json::exception &e) {
      throw ParseError(path + ": " + e.what(), lineno);
    } catch (const DomainError &e) {
      throw ParseError(path + ": " + e.what(), lineno);
    }
  }
  return out;
}

}  // namespace anchoralign
