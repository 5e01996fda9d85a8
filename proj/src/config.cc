// src/config.cc

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

#include "anchoralign/config.h"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <algorithm>
#include <charconv>
#include <iterator>
#include <sstream>

#include "anchoralign/error.h"
#include "anchoralign/fileutil.h"

namespace anchoralign {

namespace {

std::string Where(const std::string &section, const std::string &key) {
  return section + "." + key;
}

double ToDouble(const std::string &section, const std::string &key,
                const std::string &v) {
  double out;
  auto r = std::from_chars(v.data(), v.data() + v.size(), out);
  if (r.ec != std::errc() || r.ptr != v.data() + v.size())
    throw ConfigError(Where(section, key) + ": expected a number, got '" + v + "'");
  return out;
}

std::uint64_t ToUnsigned(const std::string &section, const std::string &key,
                         const std::string &v) {
  std::uint64_t out;
  auto r = std::from_chars(v.data(), v.data() + v.size(), out);
  if (r.ec != std::errc() || r.ptr != v.data() + v.size())
    throw ConfigError(Where(section, key) +
                      ": expected a non-negative integer, got '" + v + "'");
  return out;
}

bool ToBool(const std::string &section, const std::string &key,
            const std::string &v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError(Where(section, key) + ": expected true/false, got '" + v + "'");
}

std::string Num(double v) {
  char buf[40];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

}  // namespace

void ApplySetting(PipelineConfig &c, const std::string &section,
                  const std::string &key, const std::string &value) {
  auto unknown = [&] {
    throw ConfigError("unknown config key '" + Where(section, key) + "'");
  };
  auto d = [&] { return ToDouble(section, key, value); };
  auto u = [&] { return ToUnsigned(section, key, value); };

  if (section == "paths") {
    if (key == "audio_dir") c.paths.audio_dir = value;
    else if (key == "transcript_dir") c.paths.transcript_dir = value;
    else if (key == "mapping_table") c.paths.mapping_table = value;
    else if (key == "output_dir") c.paths.output_dir = value;
    else unknown();
  } else if (section == "features") {
    auto &f = c.features;
    if (key == "window_s") f.window_s = d();
    else if (key == "hop_s") f.hop_s = d();
    else if (key == "fft_size") f.fft_size = u();
    else if (key == "n_mels") f.n_mels = u();
    else if (key == "n_coeffs") f.n_coeffs = u();
    else if (key == "preemphasis") f.preemphasis = d();
    else if (key == "mel_fmin") f.mel_fmin = d();
    else if (key == "mel_fmax") f.mel_fmax = d();
    else if (key == "log_floor") f.log_floor = d();
    else if (key == "cmn") f.cmn = ToBool(section, key, value);
    else unknown();
  } else if (section == "band") {
    if (key == "radius_s") c.band.radius_s = d();
    else if (key == "metric") c.band.metric = ParseDistanceMetric(value);
    else unknown();
  } else if (section == "filter") {
    if (key == "drop_head") c.filter.drop_head = u();
    else if (key == "max_dur_s") c.filter.max_dur_s = d();
    else if (key == "min_dur_s") c.filter.min_dur_s = d();
    else if (key == "require_nonempty_text")
      c.filter.require_nonempty_text = ToBool(section, key, value);
    else unknown();
  } else if (section == "split") {
    if (key == "valid_fraction") c.split.valid_fraction = d();
    else if (key == "seed") c.split.seed = u();
    else unknown();
  } else if (section == "synth") {
    if (key == "kind") {
      if (value == "test") c.synth.kind = SynthBackend::Kind::kTest;
      else if (value == "external") c.synth.kind = SynthBackend::Kind::kExternal;
      else throw ConfigError("synth.kind must be 'test' or 'external'");
    } else if (key == "command") c.synth.command_template = value;
    else if (key == "voice") c.synth.voice = value;
    else if (key == "timeout_s") c.synth.timeout_s = d();
    else unknown();
  } else if (section == "svm") {
    if (key == "gamma") c.svm.gamma = d();
    else if (key == "C") c.svm.C = d();
    else if (key == "tol") c.svm.tol = d();
    else if (key == "max_passes") c.svm.max_passes = static_cast<int>(u());
    else if (key == "seed") c.svm.seed = u();
    else unknown();
  } else if (section == "speakers") {
    if (key == "cos_threshold") c.speaker_threshold = d();
    else unknown();
  } else if (section == "run") {
    if (key == "workers") c.workers = u();
    else unknown();
  } else {
    throw ConfigError("unknown config section '" + section + "'");
  }
}

void ApplyOverride(PipelineConfig &cfg, const std::string &assignment) {
  std::size_t eq = assignment.find('=');
  std::size_t dot = assignment.find('.');
  if (eq == std::string::npos || dot == std::string::npos || dot > eq)
    throw ConfigError("override must look like section.key=value, got '" +
                      assignment + "'");
  ApplySetting(cfg, assignment.substr(0, dot),
               assignment.substr(dot + 1, eq - dot - 1), assignment.substr(eq + 1));
}

PipelineConfig ParseConfig(const std::string &text) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  // The INI reader only knows ';' comments.
  std::string cleaned;
  std::istringstream lines(text);
  for (std::string line; std::getline(lines, line);) {
    std::size_t first = line.find_first_not_of(" \t");
    if (first != std::string::npos && line[first] == '#') continue;
    cleaned += line;
    cleaned += '\n';
  }
  std::istringstream in(cleaned);
  try {
    pt::ini_parser::read_ini(in, tree);
  } catch (const pt::ini_parser_error &e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  PipelineConfig cfg;
  for (const auto &[section, body] : tree) {
    if (body.empty() && !body.data().empty())
      throw ConfigError("config key '" + section + "' outside a section");
    static const char *kSections[] = {"paths", "features", "band",
                                      "filter", "split",    "synth",
                                      "svm",   "speakers", "run"};
    if (std::find(std::begin(kSections), std::end(kSections), section) ==
        std::end(kSections))
      throw ConfigError("unknown config section '" + section + "'");
    for (const auto &[key, leaf] : body) ApplySetting(cfg, section, key, leaf.data());
  }
  return cfg;
}

PipelineConfig LoadConfig(const std::string &path) {
  std::string text;
  try {
    text = ReadFile(path);
  } catch (const IoError &e) {
    throw ConfigError(e.what());
  }
  return ParseConfig(text);
}

void ValidateConfig(const PipelineConfig &c) {
  c.features.Validate(kPipelineRate);
  c.filter.Validate();
  c.split.Validate();
  c.synth.Validate();
  if (!(c.band.radius_s > 0.0)) throw ConfigError("band.radius_s must be positive");
  if (!(c.svm.gamma > 0.0) || !(c.svm.C > 0.0) || !(c.svm.tol > 0.0) ||
      c.svm.max_passes < 1)
    throw ConfigError("svm parameters must be positive");
  if (!(c.speaker_threshold >= -1.0 && c.speaker_threshold <= 1.0))
    throw ConfigError("speakers.cos_threshold must lie in [-1, 1]");
  if (c.workers == 0) throw ConfigError("run.workers must be at least 1");
  if (c.paths.output_dir.empty()) throw ConfigError("paths.output_dir is empty");
}

std::string DumpConfig(const PipelineConfig &c) {
  std::ostringstream o;
  o << "[paths]\n"
    << "audio_dir = " << c.paths.audio_dir << '\n'
    << "transcript_dir = " << c.paths.transcript_dir << '\n'
    << "mapping_table = " << c.paths.mapping_table << '\n'
    << "output_dir = " << c.paths.output_dir << "\n\n";
  o << "[features]\n"
    << "window_s = " << Num(c.features.window_s) << '\n'
    << "hop_s = " << Num(c.features.hop_s) << '\n'
    << "fft_size = " << c.features.fft_size << '\n'
    << "n_mels = " << c.features.n_mels << '\n'
    << "n_coeffs = " << c.features.n_coeffs << '\n'
    << "preemphasis = " << Num(c.features.preemphasis) << '\n'
    << "mel_fmin = " << Num(c.features.mel_fmin) << '\n'
    << "mel_fmax = " << Num(c.features.mel_fmax) << '\n'
    << "log_floor = " << Num(c.features.log_floor) << '\n'
    << "cmn = " << (c.features.cmn ? "true" : "false") << "\n\n";
  o << "[band]\n"
    << "radius_s = " << Num(c.band.radius_s) << '\n'
    << "metric = "
    << (c.band.metric == DistanceMetric::kCosine ? "cosine" : "euclidean")
    << "\n\n";
  o << "[filter]\n"
    << "drop_head = " << c.filter.drop_head << '\n'
    << "max_dur_s = " << Num(c.filter.max_dur_s) << '\n'
    << "min_dur_s = " << Num(c.filter.min_dur_s) << '\n'
    << "require_nonempty_text = "
    << (c.filter.require_nonempty_text ? "true" : "false") << "\n\n";
  o << "[split]\n"
    << "valid_fraction = " << Num(c.split.valid_fraction) << '\n'
    << "seed = " << c.split.seed << "\n\n";
  o << "[synth]\n"
    << "kind = " << (c.synth.kind == SynthBackend::Kind::kTest ? "test" : "external")
    << '\n'
    << "command = " << c.synth.command_template << '\n'
    << "voice = " << c.synth.voice << '\n'
    << "timeout_s = " << Num(c.synth.timeout_s) << "\n\n";
  o << "[svm]\n"
    << "gamma = " << Num(c.svm.gamma) << '\n'
    << "C = " << Num(c.svm.C) << '\n'
    << "tol = " << Num(c.svm.tol) << '\n'
    << "max_passes = " << c.svm.max_passes << '\n'
    << "seed = " << c.svm.seed << "\n\n";
  o << "[speakers]\n"
    << "cos_threshold = " << Num(c.speaker_threshold) << "\n\n";
  o << "[run]\n"
    << "workers = " << c.workers << '\n';
  return o.str();
}

}  // namespace anchoralign
