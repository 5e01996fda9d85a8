// src/dataset.cc

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

#include "anchoralign/dataset.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <set>

#include "anchoralign/error.h"
#include "anchoralign/fileutil.h"
#include "json.hpp"

namespace anchoralign {

void SplitConfig::Validate() const {
  if (!(valid_fraction > 0.0 && valid_fraction < 0.5))
    throw ConfigError("valid_fraction must lie in (0, 0.5)");
}

DatasetSplit Split(const std::vector<Segment> &kept, const SplitConfig &cfg) {
  cfg.Validate();
  std::map<std::string, double> dur;
  double total = 0.0;
  for (const Segment &s : kept) {
    dur[s.source_id] += s.duration();
    total += s.duration();
  }
  if (dur.size() < 2)
    throw DomainError("cannot split by source: " + std::to_string(dur.size()) +
                      " source(s)");

  std::vector<std::string> order;
  for (const auto &[id, d] : dur) order.push_back(id);
  std::mt19937_64 rng(cfg.seed);
  std::shuffle(order.begin(), order.end(), rng);

  const double target = cfg.valid_fraction * total;
  std::set<std::string> valid;
  DatasetSplit out;
  double acc = 0.0;
  for (const std::string &id : order) {
    if (valid.count(id)) continue;
    if (dur.size() - valid.size() <= 1) break;
    if (acc + dur[id] < target) {
      valid.insert(id);
      out.valid_sources.push_back(id);
      acc += dur[id];
      continue;
    }
    // Crossing step: the remaining source with the smallest overshoot.
    const std::string *best = nullptr;
    double best_over = 0.0;
    for (const std::string &cand : order) {
      if (valid.count(cand)) continue;
      double over = acc + dur[cand] - target;
      if (over < 0.0) continue;
      if (best == nullptr || over < best_over) {
        best = &cand;
        best_over = over;
      }
    }
    valid.insert(*best);
    out.valid_sources.push_back(*best);
    break;
  }
  for (const Segment &s : kept)
    (valid.count(s.source_id) ? out.valid : out.train).push_back(s);
  return out;
}

void WriteManifest(const std::string &path,
                   const std::vector<ManifestEntry> &entries) {
  AtomicFile f(path);
  for (const ManifestEntry &e : entries) {
    nlohmann::ordered_json j;
    j["audio_filepath"] = e.audio_filepath;
    j["duration"] = std::round(e.duration * 1000.0) / 1000.0;
    j["text"] = e.text;
    f.stream() << j.dump() << '\n';
  }
  f.Commit();
}

std::vector<ManifestEntry> ReadManifest(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::vector<ManifestEntry> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      auto j = nlohmann::json::parse(line);
      if (j.size() != 3) throw ParseError("manifest entry must have 3 keys", lineno);
      ManifestEntry e;
      e.audio_filepath = j.at("audio_filepath").get<std::string>();
      e.duration = j.at("duration").get<double>();
      e.text = j.at("text").get<std::string>();
      out.push_back(std::move(e));
    } catch (const nlohmann::json::exception &ex) {
      throw ParseError(path + ": " + ex.what(), lineno);
    }
  }
  return out;
}

DurationStats ComputeDurationStats(const std::vector<Segment> &segments,
                                   double max_dur_s) {
  DurationStats st;
  std::size_t bins = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::ceil(max_dur_s / st.bin_width_s)));
  st.histogram.assign(bins, 0);
  for (const Segment &s : segments) {
    const double d = s.duration();
    st.total_s += d;
    st.per_source_s[s.source_id] += d;
    double k = std::floor(d / st.bin_width_s);
    std::size_t bin = k < 0 ? 0 : static_cast<std::size_t>(k);
    st.histogram[std::min(bin, bins - 1)]++;
  }
  return st;
}

void WriteStatsCsv(const std::string &path, const DurationStats &st) {
  AtomicFile f(path);
  f.stream() << "bin_start_s,bin_end_s,count\n";
  for (std::size_t k = 0; k < st.histogram.size(); ++k)
    f.stream() << Fixed(k * st.bin_width_s, 0) << ','
               << Fixed((k + 1) * st.bin_width_s, 0) << ',' << st.histogram[k]
               << '\n';
  f.Commit();
}

void WriteStatsSvg(const std::string &path, const DurationStats &st) {
  const int width = 640, height = 360, margin = 40;
  const std::size_t bins = st.histogram.size();
  std::size_t peak = 1;
  for (std::size_t c : st.histogram) peak = std::max(peak, c);
  const double bar_w = static_cast<double>(width - 2 * margin) / bins;
  const double plot_h = height - 2 * margin;

  AtomicFile f(path);
  auto &o = f.stream();
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
    << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << ' ' << height
    << "\">\n";
  o << "<title>Segment duration distribution</title>\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (std::size_t k = 0; k < bins; ++k) {
    const double h = plot_h * st.histogram[k] / peak;
    o << "<rect x=\"" << Fixed(margin + k * bar_w + 1, 2) << "\" y=\""
      << Fixed(height - margin - h, 2) << "\" width=\"" << Fixed(bar_w - 2, 2)
      << "\" height=\"" << Fixed(h, 2) << "\" fill=\"#4477aa\"><title>"
      << k << "-" << k + 1 << " s: " << st.histogram[k] << "</title></rect>\n";
    o << "<text x=\"" << Fixed(margin + (k + 0.5) * bar_w, 2) << "\" y=\""
      << height - margin + 14 << "\" font-size=\"10\" text-anchor=\"middle\">"
      << k << "</text>\n";
  }
  o << "<line x1=\"" << margin << "\" y1=\"" << height - margin << "\" x2=\""
    << width - margin << "\" y2=\"" << height - margin
    << "\" stroke=\"black\"/>\n";
  o << "<text x=\"" << width / 2 << "\" y=\"" << height - 8
    << "\" font-size=\"12\" text-anchor=\"middle\">segment duration (s), total "
    << Fixed(st.total_hours(), 2) << " h</text>\n";
  o << "<text x=\"12\" y=\"" << margin - 12 << "\" font-size=\"12\">count (max "
    << peak << ")</text>\n";
  o << "</svg>\n";
  f.Commit();
}

void WriteGenderCsv(const std::string &path, double male_hours,
                    double female_hours) {
  AtomicFile f(path);
  f.stream() << "label,hours\n"
             << "male," << Fixed(male_hours, 4) << '\n'
             << "female," << Fixed(female_hours, 4) << '\n';
  f.Commit();
}

}  // namespace anchoralign
