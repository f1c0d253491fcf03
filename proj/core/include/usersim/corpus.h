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

#ifndef USERSIM_CORPUS_H_
#define USERSIM_CORPUS_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "usersim/delexicalize.h"
#include "usersim/dialogue_acts.h"
#include "usersim/features.h"
#include "usersim/ontology.h"
#include "usersim/seq2seq.h"
#include "usersim/vocabulary.h"

namespace usersim {

struct RawTurn {
  std::vector<SystemAct> system_acts;
  std::string user_text;
  // Cumulative constraint labels after the user's utterance.
  Constraints constraints;

  bool operator==(const RawTurn&) const = default;
};

struct RawDialogue {
  std::string id;
  std::vector<RawTurn> turns;
  // Requests of the final goal; the same for every turn.
  std::vector<std::string> requests;

  bool operator==(const RawDialogue&) const = default;
};

// Normalized corpus document: an array of dialogues, each an array of turns
// {sys_acts: [{act, slots: [[slot, value] or [slot]]}], user_text,
// constraints: {slot: value}, requests: [slot]}. Dialogue ids are positions.
nlohmann::json SystemActToJson(const SystemAct& act);
SystemAct SystemActFromJson(const nlohmann::json& j);
nlohmann::json CorpusToJson(std::span<const RawDialogue> dialogues);
std::vector<RawDialogue> CorpusFromJson(const nlohmann::json& doc);
void SaveCorpus(const std::string& path, std::span<const RawDialogue> dialogues);
std::vector<RawDialogue> LoadCorpus(const std::string& path);

// Word-to-word spelling fixes, one `wrong<TAB>right` pair per line. The
// replacement may span several words.
class CorrectionMap {
 public:
  CorrectionMap() = default;
  static CorrectionMap Parse(std::string_view text);
  static CorrectionMap Load(const std::filesystem::path& path);

  // Normalizes, then replaces whole words. `corrections` counts
  // replacements when non-null.
  std::string Apply(std::string_view text, int* corrections = nullptr) const;
  size_t size() const { return map_.size(); }

 private:
  std::map<std::string, std::string, std::less<>> map_;
};

// Turns cumulative per-turn labels into the goal the user held at each
// turn: walking backwards, a turn inherits the next turn's goal except for
// slots it labels with a different value. A slot that vanishes between
// turns is kept and counted in `warnings`.
std::vector<Constraints> TransformGoalLabels(std::span<const Constraints> labels,
                                             int* warnings = nullptr);

struct ImportOptions {
  // A dialogue is discarded when more than this fraction of the label values
  // it introduces cannot be found in the corrected transcriptions.
  double max_missing_value_fraction = 0.2;
  // Alternative act names accepted as one of the closed system act types.
  std::map<std::string, std::string> act_aliases = {{"canthelp.exception", "canthelp"}};
};

struct ImportReport {
  std::vector<RawDialogue> dialogues;
  int calls = 0;
  int discarded = 0;
  int dropped_slots = 0;  // act payload slots outside the ontology
};

// DSTC2 layout: one directory per call with log.json and label.json. Throws
// kIo for unreadable documents and kUnknownAct naming the call.
ImportReport ImportDstc2(const std::filesystem::path& root, const Ontology& ontology,
                         const CorrectionMap& corrections, const ImportOptions& options = {});
// Calls listed in a file-list (one path per line, relative to data_root).
ImportReport ImportDstc2List(const std::filesystem::path& data_root,
                             const std::filesystem::path& file_list, const Ontology& ontology,
                             const CorrectionMap& corrections, const ImportOptions& options = {});

struct TrainingTurn {
  std::vector<FeatureVector> history;  // one vector per system turn so far
  std::vector<std::string> target;     // delexicalized, ends in <EOS>
  std::string dialogue_id;
  int turn = 0;
};

struct CorpusStats {
  size_t n_dialogues = 0;
  size_t n_turns = 0;     // usable training turns
  size_t n_excluded = 0;  // turns over the length limit
  size_t max_turn_len = 0;  // tokens, counting <EOS>
  size_t max_dialogue_len = 0;
  size_t vocab_size = 0;

  nlohmann::json ToJson() const;
};

struct TrainingSet {
  std::vector<TrainingTurn> turns;
  CorpusStats stats;
  Vocabulary vocab;
};

// Replays the feature extractor over every dialogue with the transformed
// per-turn goals and delexicalizes every user turn. The vocabulary covers
// exactly the kept targets.
TrainingSet BuildTrainingSet(std::span<const RawDialogue> dialogues, const Ontology& ontology,
                             int max_len = kMaxTurnTokens);

// Dense features and ids; words outside `vocab` become <UNK>.
std::vector<nn::Example> ToExamples(std::span<const TrainingTurn> turns, const Vocabulary& vocab);

// Seeded shuffle of dialogue order, then the first train_fraction go to
// training.
std::pair<std::vector<RawDialogue>, std::vector<RawDialogue>> SplitByDialogue(
    std::span<const RawDialogue> dialogues, double train_fraction, uint64_t seed);

// Fraction of dialogues requesting each requestable slot.
std::map<std::string, double> EstimateRequestProbs(std::span<const RawDialogue> dialogues,
                                                   const Ontology& ontology);

}  // namespace usersim

#endif  // USERSIM_CORPUS_H_
