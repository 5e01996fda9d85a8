// tools/anchoralign.cc

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

#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "anchoralign/config.h"
#include "anchoralign/error.h"
#include "anchoralign/log.h"
#include "anchoralign/pipeline.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitProcessing = 1;
constexpr int kExitConfig = 2;

}  // namespace

int main(int argc, char *argv[]) {
  using namespace anchoralign;

  CLI::App app{
      "Builds an ASR corpus from long news bulletins and their transcripts by\n"
      "aligning each transcript fragment against synthesized speech.\n"};
  app.require_subcommand(1, 1);
  app.fallthrough();

  std::string config_path, log_level = "info";
  std::vector<std::string> overrides;
  app.add_option("-c,--config", config_path, "INI config file")->check(CLI::ExistingFile);
  app.add_option("--set", overrides,
                 "Override a config value, section.key=value (repeatable; wins "
                 "over the file)");
  app.add_option("--log-level", log_level, "debug, info, warning, error or off");

  std::string embeddings, labels, model;

  auto *decode = app.add_subcommand("decode-text", "Legacy text to Unicode fragments");
  auto *align = app.add_subcommand("align", "Synthesize, featurize and DTW-align each bulletin");
  auto *filter = app.add_subcommand("filter", "Apply head-drop and duration rules");
  auto *cut = app.add_subcommand("cut", "Write kept segments as WAV clips");
  auto *manifest = app.add_subcommand("manifest", "Split by source and write manifests");
  auto *stats = app.add_subcommand("stats", "Duration totals and histogram");
  auto *run = app.add_subcommand("run", "align, filter, cut, manifest and stats");

  auto *train = app.add_subcommand("train-gender", "Train the RBF SVM gender classifier");
  train->add_option("--embeddings", embeddings, "Embedding file")->required();
  train->add_option("--labels", labels, "source_id<TAB>index<TAB>male|female")->required();
  train->add_option("--model", model, "Model output path")->required();

  auto *classify = app.add_subcommand("classify-gender", "Label kept segments, write gender.csv");
  classify->add_option("--model", model, "Trained model")->required();
  classify->add_option("--embeddings", embeddings, "Embedding file")->required();

  auto *speakers = app.add_subcommand("speakers", "Estimate the speaker count");
  speakers->add_option("--embeddings", embeddings, "Embedding file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  CLI::App *cmd = app.get_subcommands().front();
  const std::string name = cmd->get_name();
  try {
    SetLogLevel(ParseLogLevel(log_level));
    PipelineConfig cfg;
    if (!config_path.empty()) cfg = LoadConfig(config_path);
    for (const std::string &o : overrides) ApplyOverride(cfg, o);
    ValidateConfig(cfg);

    StageResult r;
    if (cmd == decode) r = DecodeTexts(cfg);
    else if (cmd == align) r = AlignAll(cfg);
    else if (cmd == filter) r = FilterAll(cfg);
    else if (cmd == cut) r = CutAll(cfg);
    else if (cmd == manifest) r = BuildManifests(cfg);
    else if (cmd == stats) r = ComputeStats(cfg);
    else if (cmd == run) r = RunPipeline(cfg);
    else if (cmd == train) r = TrainGender(cfg, embeddings, labels, model);
    else if (cmd == classify) r = ClassifyGender(cfg, model, embeddings);
    else r = EstimateSpeakerCount(cfg, embeddings);

    r.summary["exit_code"] = r.ok ? kExitOk : kExitProcessing;
    WriteSummary(cfg, name, r.summary);
    std::cout << r.summary.dump(2) << std::endl;
    return r.ok ? kExitOk : kExitProcessing;
  } catch (const ConfigError &e) {
    Log(LogLevel::kError, "config_error", {{"command", name}, {"error", e.what()}});
    return kExitConfig;
  } catch (const std::exception &e) {
    Log(LogLevel::kError, "failed", {{"command", name}, {"error", e.what()}});
    return kExitProcessing;
  }
}
