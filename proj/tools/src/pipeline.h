// Copyright 2026 The Usersim Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#ifndef USERSIM_TOOLS_PIPELINE_H_
#define USERSIM_TOOLS_PIPELINE_H_

#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "usersim/corpus.h"
#include "usersim/harness.h"
#include "usersim/ontology.h"
#include "usersim/seq2seq.h"
#include "usersim/semantic_decoder.h"
#include "usersim/system_renderer.h"
#include "usersim/trainer.h"

namespace usersim::app {

using Logger = std::function<void(const std::string&)>;

struct Resources {
  Ontology ontology;
  std::unique_ptr<SemanticDecoder> decoder;
  std::unique_ptr<CachingDecoder> cached_decoder;
  SystemRenderer renderer;

  DialogueEnv Env() const { return {&ontology, cached_decoder.get(), &renderer}; }
};

std::unique_ptr<Resources> LoadResources(const nlohmann::json& config);

// The corpus named by the config, or a freshly synthesized one.
std::vector<RawDialogue> ObtainCorpus(const nlohmann::json& config, const Ontology& ontology);

ImportReport ImportDstc2Corpus(const nlohmann::json& config, const Ontology& ontology);

struct UserModelRun {
  nn::Seq2SeqModel model;
  nn::TrainResult result;
  CorpusStats train_stats;
  CorpusStats valid_stats;
};

// Splits the corpus by dialogue, trains the sequence model and keeps the
// parameters of the best validation epoch.
UserModelRun TrainUserModel(const nlohmann::json& config, const Ontology& ontology,
                            std::span<const RawDialogue> corpus, const Logger& log = nullptr);

// Loads the "model" checkpoint, or trains one and saves it under run_dir.
nn::Seq2SeqModel ObtainUserModel(const nlohmann::json& config, const Ontology& ontology,
                                 const std::filesystem::path& run_dir, const Logger& log = nullptr);

uint64_t PolicySeed(const nlohmann::json& config, int index);
uint64_t TestSeed(const nlohmann::json& config);

struct CrossEvalRun {
  // Keyed by policy training length.
  std::map<int, MetricsReport> reports;
  std::map<std::string, double> seconds;
};

// Trains n_policy_seeds policies on each simulator for every training length,
// tests each on every simulator and writes policies, curves and reports
// under run_dir.
CrossEvalRun RunCrossEvaluation(const nlohmann::json& config, const Resources& resources,
                                const nn::Seq2SeqModel& model,
                                const std::filesystem::path& run_dir, const Logger& log = nullptr);

}  // namespace usersim::app

#endif  // USERSIM_TOOLS_PIPELINE_H_
