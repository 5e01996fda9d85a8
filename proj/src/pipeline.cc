// src/pipeline.cc

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

#include "anchoralign/pipeline.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <thread>

#include "anchoralign/align.h"
#include "anchoralign/analytics.h"
#include "anchoralign/dataset.h"
#include "anchoralign/error.h"
#include "anchoralign/fileutil.h"
#include "anchoralign/log.h"
#include "anchoralign/textnorm.h"

namespace anchoralign {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

namespace {

fs::path Out(const PipelineConfig &cfg) { return fs::path(cfg.paths.output_dir); }

void EnsureDir(const fs::path &p) {
  std::error_code ec;
  fs::create_directories(p, ec);
  if (ec) throw IoError("cannot create '" + p.string() + "': " + ec.message());
}

void RequireDir(const std::string &path, const char *key) {
  if (path.empty()) throw ConfigError(std::string("paths.") + key + " is not set");
  if (!fs::is_directory(path))
    throw ConfigError(std::string("paths.") + key + " '" + path +
                      "' is not a directory");
}

double Round(double v, int digits) {
  double s = std::pow(10.0, digits);
  return std::round(v * s) / s;
}

// Runs fn(i) for i in [0, n) on up to `workers` threads. Exceptions are
// the callee's business.
template <typename Fn>
void ForEachParallel(std::size_t n, std::size_t workers, Fn fn) {
  workers = std::max<std::size_t>(1, std::min(workers, n));
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) fn(i);
    });
  for (auto &t : pool) t.join();
}

std::unique_ptr<MappingTable> MaybeLoadTable(const PipelineConfig &cfg) {
  if (cfg.paths.mapping_table.empty()) return nullptr;
  if (!fs::is_regular_file(cfg.paths.mapping_table))
    throw ConfigError("paths.mapping_table '" + cfg.paths.mapping_table +
                      "' does not exist");
  return std::make_unique<MappingTable>(LoadMapping(cfg.paths.mapping_table));
}

std::vector<std::string> ListStems(const fs::path &dir, const std::string &ext) {
  std::vector<std::string> out;
  for (const auto &e : fs::directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ext)
      out.push_back(e.path().stem().string());
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::string> SegmentSources(const fs::path &dir) {
  if (!fs::is_directory(dir))
    throw ConfigError("'" + dir.string() +
                      "' does not exist; run the previous stage first");
  return ListStems(dir, ".jsonl");
}

std::vector<Segment> ReadAllSegments(const fs::path &dir) {
  std::vector<Segment> all;
  for (const std::string &id : SegmentSources(dir)) {
    std::vector<Segment> s = ReadSegments((dir / (id + ".jsonl")).string());
    all.insert(all.end(), s.begin(), s.end());
  }
  return all;
}

std::vector<Segment> KeptOnly(const std::vector<Segment> &segs) {
  std::vector<Segment> out;
  for (const Segment &s : segs)
    if (s.kept()) out.push_back(s);
  return out;
}

AudioBuffer LoadPipelineAudio(const std::string &path) {
  AudioBuffer a = ReadWav(path);
  return a.sample_rate() == kPipelineRate ? a : Resample(a, kPipelineRate);
}

Json HoursBySource(const std::map<std::string, double> &m) {
  Json j = Json::object();
  for (const auto &[id, s] : m) j[id] = Round(s / 3600.0, 2);
  return j;
}

}  // namespace

std::vector<std::string> DiscoverSources(const PipelineConfig &cfg,
                                         bool need_audio) {
  RequireDir(cfg.paths.transcript_dir, "transcript_dir");
  std::vector<std::string> ids = ListStems(cfg.paths.transcript_dir, ".txt");
  if (!need_audio) return ids;
  RequireDir(cfg.paths.audio_dir, "audio_dir");
  std::vector<std::string> audio = ListStems(cfg.paths.audio_dir, ".wav");
  std::vector<std::string> missing_audio, missing_text;
  std::set_difference(ids.begin(), ids.end(), audio.begin(), audio.end(),
                      std::back_inserter(missing_audio));
  std::set_difference(audio.begin(), audio.end(), ids.begin(), ids.end(),
                      std::back_inserter(missing_text));
  if (!missing_audio.empty())
    throw ConfigError("transcript '" + missing_audio.front() +
                      ".txt' has no matching audio in " + cfg.paths.audio_dir);
  if (!missing_text.empty())
    throw ConfigError("audio '" + missing_text.front() +
                      ".wav' has no matching transcript in " +
                      cfg.paths.transcript_dir);
  return ids;
}

void WriteSummary(const PipelineConfig &cfg, const std::string &command,
                  const Json &summary) {
  EnsureDir(Out(cfg));
  AtomicFile f((Out(cfg) / ("summary_" + command + ".json")).string());
  f.stream() << summary.dump(2) << '\n';
  f.Commit();
}

StageResult DecodeTexts(const PipelineConfig &cfg) {
  ValidateConfig(cfg);
  const auto table = MaybeLoadTable(cfg);
  const auto ids = DiscoverSources(cfg, false);
  EnsureDir(Out(cfg) / "fragments");
  StageResult r;
  std::size_t fragments = 0, unmatched = 0;
  for (const std::string &id : ids) {
    std::string text = ReadFile((fs::path(cfg.paths.transcript_dir) / (id + ".txt")).string());
    std::size_t miss = 0;
    auto frags = NormalizeTranscript(text, table.get(), id, &miss);
    AtomicFile f((Out(cfg) / "fragments" / (id + ".tsv")).string());
    for (const auto &fr : frags) f.stream() << fr.index << '\t' << fr.text << '\n';
    f.Commit();
    if (miss > 0)
      Log(LogLevel::kWarning, "unmatched_legacy_codepoints",
          {{"source_id", id}, {"count", miss}});
    fragments += frags.size();
    unmatched += miss;
  }
  r.summary["command"] = "decode-text";
  r.summary["sources"] = ids.size();
  r.summary["fragments"] = fragments;
  r.summary["unmatched_codepoints"] = unmatched;
  return r;
}

StageResult AlignAll(const PipelineConfig &cfg) {
  ValidateConfig(cfg);
  const auto table = MaybeLoadTable(cfg);
  const auto ids = DiscoverSources(cfg, true);
  const fs::path seg_dir = Out(cfg) / "segments";
  EnsureDir(seg_dir);

  AlignConfig acfg;
  acfg.features = cfg.features;
  acfg.band = cfg.band;
  acfg.synth_workers = 1;

  struct Outcome {
    bool ok = false;
    std::size_t fragments = 0;
    double audio_s = 0.0;
    std::string error;
  };
  std::vector<Outcome> outcomes(ids.size());
  ForEachParallel(ids.size(), cfg.workers, [&](std::size_t k) {
    const std::string &id = ids[k];
    Outcome &o = outcomes[k];
    try {
      std::string text =
          ReadFile((fs::path(cfg.paths.transcript_dir) / (id + ".txt")).string());
      auto frags = NormalizeTranscript(text, table.get(), id);
      if (frags.empty()) throw DomainError("transcript has no Devanagari text");
      AudioBuffer audio =
          LoadPipelineAudio((fs::path(cfg.paths.audio_dir) / (id + ".wav")).string());
      BulletinAlignment al = AlignBulletin(frags, audio, cfg.synth, acfg);
      WriteSegments((seg_dir / (id + ".jsonl")).string(), al.segments);
      o.ok = true;
      o.fragments = frags.size();
      o.audio_s = audio.duration();
      Log(LogLevel::kInfo, "aligned",
          {{"source_id", id},
           {"fragments", frags.size()},
           {"real_frames", al.real_frames},
           {"synth_frames", al.synth_frames},
           {"cost", al.path.total_cost}});
    } catch (const std::exception &e) {
      o.error = e.what();
      Log(LogLevel::kError, "align_failed", {{"source_id", id}, {"error", o.error}});
    }
  });

  StageResult r;
  std::size_t ok = 0, fragments = 0;
  double audio_s = 0.0;
  Json failed = Json::array();
  for (std::size_t k = 0; k < ids.size(); ++k) {
    if (outcomes[k].ok) {
      ++ok;
      fragments += outcomes[k].fragments;
      audio_s += outcomes[k].audio_s;
    } else {
      failed.push_back({{"source_id", ids[k]}, {"error", outcomes[k].error}});
    }
  }
  r.ok = failed.empty();
  r.summary["command"] = "align";
  r.summary["sources"] = ids.size();
  r.summary["sources_processed"] = ok;
  r.summary["sources_failed"] = failed;
  r.summary["fragments"] = fragments;
  r.summary["audio_hours"] = Round(audio_s / 3600.0, 2);
  return r;
}

StageResult FilterAll(const PipelineConfig &cfg) {
  ValidateConfig(cfg);
  const fs::path seg_dir = Out(cfg) / "segments";
  const fs::path flt_dir = Out(cfg) / "filtered";
  const auto ids = SegmentSources(seg_dir);
  EnsureDir(flt_dir);

  std::vector<Segment> report;
  std::map<std::string, std::size_t> reasons;
  for (RejectReason rr : {RejectReason::kHeadDrop, RejectReason::kTooLong,
                          RejectReason::kTooShort, RejectReason::kEmptyText})
    reasons[ReasonName(rr)] = 0;
  std::size_t kept = 0;
  double kept_s = 0.0;
  for (const std::string &id : ids) {
    auto segs = ApplyFilters(ReadSegments((seg_dir / (id + ".jsonl")).string()), cfg.filter);
    if (segs.size() <= cfg.filter.drop_head)
      Log(LogLevel::kWarning, "short_bulletin",
          {{"source_id", id},
           {"segments", segs.size()},
           {"note", "every segment falls in the head-drop window"}});
    WriteSegments((flt_dir / (id + ".jsonl")).string(), segs);
    for (const Segment &s : segs) {
      if (s.kept()) {
        ++kept;
        kept_s += s.duration();
      } else {
        ++reasons[ReasonName(s.reason)];
      }
    }
    report.insert(report.end(), segs.begin(), segs.end());
  }
  WriteRejectionReport((Out(cfg) / "rejections.csv").string(), report);

  StageResult r;
  r.summary["command"] = "filter";
  r.summary["sources"] = ids.size();
  r.summary["segments"] = report.size();
  r.summary["kept"] = kept;
  r.summary["rejected"] = report.size() - kept;
  Json jr = Json::object();
  for (const auto &[k, v] : reasons) jr[k] = v;
  r.summary["rejected_by_reason"] = jr;
  r.summary["kept_hours"] = Round(kept_s / 3600.0, 2);
  return r;
}

StageResult CutAll(const PipelineConfig &cfg) {
  ValidateConfig(cfg);
  RequireDir(cfg.paths.audio_dir, "audio_dir");
  const fs::path flt_dir = Out(cfg) / "filtered";
  const auto ids = SegmentSources(flt_dir);
  for (const std::string &id : ids)
    if (!fs::is_regular_file(fs::path(cfg.paths.audio_dir) / (id + ".wav")))
      throw ConfigError("no audio for source '" + id + "' in " + cfg.paths.audio_dir);
  const fs::path clip_dir = Out(cfg) / "clips";

  std::vector<std::size_t> written(ids.size(), 0);
  std::vector<std::string> errors(ids.size());
  ForEachParallel(ids.size(), cfg.workers, [&](std::size_t k) {
    const std::string &id = ids[k];
    try {
      auto segs = ReadSegments((flt_dir / (id + ".jsonl")).string());
      AudioBuffer audio =
          LoadPipelineAudio((fs::path(cfg.paths.audio_dir) / (id + ".wav")).string());
      written[k] = CutSegments(audio, segs, clip_dir.string()).size();
    } catch (const std::exception &e) {
      errors[k] = e.what();
      Log(LogLevel::kError, "cut_failed", {{"source_id", id}, {"error", errors[k]}});
    }
  });
  StageResult r;
  std::size_t total = 0;
  Json failed = Json::array();
  for (std::size_t k = 0; k < ids.size(); ++k) {
    total += written[k];
    if (!errors[k].empty()) failed.push_back({{"source_id", ids[k]}, {"error", errors[k]}});
  }
  r.ok = failed.empty();
  r.summary["command"] = "cut";
  r.summary["sources"] = ids.size();
  r.summary["clips_written"] = total;
  r.summary["sources_failed"] = failed;
  return r;
}

StageResult BuildManifests(const PipelineConfig &cfg) {
  ValidateConfig(cfg);
  const auto kept = KeptOnly(ReadAllSegments(Out(cfg) / "filtered"));
  DatasetSplit split = Split(kept, cfg.split);

  auto entries = [&](const std::vector<Segment> &segs, double &hours) {
    std::vector<ManifestEntry> out;
    double total = 0.0;
    for (const Segment &s : segs) {
      const std::string rel = (fs::path("clips") / SegmentFileName(s)).string();
      const fs::path abs = Out(cfg) / rel;
      if (!fs::is_regular_file(abs))
        throw Error("segment clip '" + abs.string() + "' is missing; run cut first");
      ManifestEntry e;
      e.audio_filepath = rel;
      e.duration = ReadWav(abs.string()).duration();
      e.text = s.text;
      total += e.duration;
      out.push_back(std::move(e));
    }
    hours = total / 3600.0;
    return out;
  };
  double train_h = 0.0, valid_h = 0.0;
  WriteManifest((Out(cfg) / "manifest_train.jsonl").string(), entries(split.train, train_h));
  WriteManifest((Out(cfg) / "manifest_valid.jsonl").string(), entries(split.valid, valid_h));

  StageResult r;
  r.summary["command"] = "manifest";
  r.summary["seed"] = cfg.split.seed;
  r.summary["valid_fraction_target"] = cfg.split.valid_fraction;
  r.summary["train_segments"] = split.train.size();
  r.summary["valid_segments"] = split.valid.size();
  r.summary["train_hours"] = Round(train_h, 2);
  r.summary["valid_hours"] = Round(valid_h, 2);
  r.summary["valid_sources"] = split.valid_sources;
  return r;
}

StageResult ComputeStats(const PipelineConfig &cfg) {
  ValidateConfig(cfg);
  const auto kept = KeptOnly(ReadAllSegments(Out(cfg) / "filtered"));
  DurationStats st = ComputeDurationStats(kept, cfg.filter.max_dur_s);
  WriteStatsCsv((Out(cfg) / "stats.csv").string(), st);
  WriteStatsSvg((Out(cfg) / "stats.svg").string(), st);

  StageResult r;
  r.summary["command"] = "stats";
  r.summary["kept_segments"] = kept.size();
  r.summary["total_hours"] = Round(st.total_hours(), 2);
  r.summary["per_source_hours"] = HoursBySource(st.per_source_s);
  Json hist = Json::array();
  for (std::size_t c : st.histogram) hist.push_back(c);
  r.summary["histogram"] = hist;
  for (const char *split : {"train", "valid"}) {
    fs::path p = Out(cfg) / (std::string("manifest_") + split + ".jsonl");
    if (!fs::is_regular_file(p)) continue;
    double s = 0.0;
    for (const auto &e : ReadManifest(p.string())) s += e.duration;
    r.summary[std::string(split) + "_hours"] = Round(s / 3600.0, 2);
  }
  return r;
}

StageResult RunPipeline(const PipelineConfig &cfg) {
  StageResult r;
  r.summary["command"] = "run";
  r.summary["seed"] = cfg.split.seed;
  StageResult a = AlignAll(cfg);
  r.summary["align"] = a.summary;
  r.ok = a.ok;
  StageResult f = FilterAll(cfg);
  r.summary["filter"] = f.summary;
  StageResult c = CutAll(cfg);
  r.summary["cut"] = c.summary;
  r.ok = r.ok && c.ok;
  StageResult m = BuildManifests(cfg);
  r.summary["manifest"] = m.summary;
  StageResult s = ComputeStats(cfg);
  r.summary["stats"] = s.summary;
  return r;
}

namespace {

std::map<SegmentRef, Gender> LoadLabels(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::map<SegmentRef, Gender> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::size_t t1 = line.find('\t');
    std::size_t t2 = t1 == std::string::npos ? t1 : line.find('\t', t1 + 1);
    if (t2 == std::string::npos)
      throw ParseError("expected source_id<TAB>index<TAB>label", lineno);
    SegmentRef ref;
    ref.source_id = line.substr(0, t1);
    try {
      ref.index = std::stoul(line.substr(t1 + 1, t2 - t1 - 1));
      out[ref] = ParseGender(line.substr(t2 + 1));
    } catch (const std::exception &e) {
      throw ParseError(e.what(), lineno);
    }
  }
  return out;
}

}  // namespace

StageResult TrainGender(const PipelineConfig &cfg, const std::string &embeddings_path,
                        const std::string &labels_path, const std::string &model_path) {
  ValidateConfig(cfg);
  for (const auto &p : {embeddings_path, labels_path})
    if (!fs::is_regular_file(p)) throw ConfigError("'" + p + "' does not exist");
  auto emb = LoadEmbeddings(embeddings_path);
  auto labels = LoadLabels(labels_path);
  std::vector<std::vector<float>> x;
  std::vector<Gender> y;
  for (const Embedding &e : emb) {
    auto it = labels.find(e.ref);
    if (it == labels.end()) continue;
    x.push_back(e.vector);
    y.push_back(it->second);
  }
  SvmTrace trace;
  SvmModel m = TrainSvm(x, y, cfg.svm, &trace);
  SaveSvmModel(model_path, m);
  std::size_t correct = 0;
  for (std::size_t i = 0; i < x.size(); ++i) correct += m.Predict(x[i]) == y[i];
  StageResult r;
  r.summary["command"] = "train-gender";
  r.summary["examples"] = x.size();
  r.summary["support_vectors"] = m.support_vectors.size();
  r.summary["sweeps"] = trace.sweeps;
  r.summary["training_accuracy"] = x.empty() ? 0.0 : static_cast<double>(correct) / x.size();
  r.summary["gamma"] = m.gamma;
  r.summary["C"] = m.C;
  r.summary["seed"] = cfg.svm.seed;
  return r;
}

StageResult ClassifyGender(const PipelineConfig &cfg, const std::string &model_path,
                           const std::string &embeddings_path) {
  ValidateConfig(cfg);
  for (const auto &p : {model_path, embeddings_path})
    if (!fs::is_regular_file(p)) throw ConfigError("'" + p + "' does not exist");
  SvmModel m = LoadSvmModel(model_path);
  std::map<SegmentRef, std::vector<float>> emb;
  for (auto &e : LoadEmbeddings(embeddings_path)) emb[e.ref] = std::move(e.vector);
  const auto kept = KeptOnly(ReadAllSegments(Out(cfg) / "filtered"));

  std::vector<Gender> pred;
  AtomicFile f((Out(cfg) / "predictions.tsv").string());
  for (const Segment &s : kept) {
    auto it = emb.find({s.source_id, s.fragment_index});
    if (it == emb.end())
      throw Error("no embedding for kept segment " + s.source_id + "#" +
                  std::to_string(s.fragment_index));
    pred.push_back(m.Predict(it->second));
    f.stream() << s.source_id << '\t' << s.fragment_index << '\t'
               << GenderName(pred.back()) << '\n';
  }
  f.Commit();
  auto [male, female] = GenderHours(kept, pred);
  WriteGenderCsv((Out(cfg) / "gender.csv").string(), male, female);
  StageResult r;
  r.summary["command"] = "classify-gender";
  r.summary["segments"] = kept.size();
  r.summary["male_hours"] = Round(male, 4);
  r.summary["female_hours"] = Round(female, 4);
  return r;
}

StageResult EstimateSpeakerCount(const PipelineConfig &cfg,
                                 const std::string &embeddings_path) {
  ValidateConfig(cfg);
  if (!fs::is_regular_file(embeddings_path))
    throw ConfigError("'" + embeddings_path + "' does not exist");
  auto emb = LoadEmbeddings(embeddings_path);
  SpeakerClusters c = EstimateSpeakers(emb, cfg.speaker_threshold);
  EnsureDir(Out(cfg));
  AtomicFile f((Out(cfg) / "speakers.tsv").string());
  for (std::size_t k = 0; k < emb.size(); ++k)
    f.stream() << emb[k].ref.source_id << '\t' << emb[k].ref.index << '\t'
               << c.assignment[k] << '\n';
  f.Commit();
  StageResult r;
  r.summary["command"] = "speakers";
  r.summary["embeddings"] = emb.size();
  r.summary["cos_threshold"] = cfg.speaker_threshold;
  r.summary["speakers"] = c.count;
  return r;
}

}  // namespace anchoralign
