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

#include "usersim/corpus.h"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <glog/logging.h>

#include "usersim/checkpoint.h"
#include "usersim/errors.h"
#include "usersim/semantic_decoder.h"

namespace usersim {
namespace fs = std::filesystem;

nlohmann::json SystemActToJson(const SystemAct& act) {
  nlohmann::json slots = nlohmann::json::array();
  for (const SlotValue& sv : act.payload) {
    if (sv.value.empty()) {
      slots.push_back({sv.slot});
    } else {
      slots.push_back({sv.slot, sv.value});
    }
  }
  return {{"act", std::string(ActName(act.type))}, {"slots", std::move(slots)}};
}

SystemAct SystemActFromJson(const nlohmann::json& j) {
  const std::string name = j.at("act").get<std::string>();
  const auto type = ParseSystemActType(name);
  if (!type) throw Error(ErrorCode::kUnknownAct, name);
  SystemAct act = SystemAct::Make(*type);
  for (const auto& pair : j.value("slots", nlohmann::json::array())) {
    if (pair.empty() || pair.size() > 2) throw Error(ErrorCode::kParse, "bad slot pair");
    act.payload.push_back(
        {pair[0].get<std::string>(), pair.size() == 2 ? pair[1].get<std::string>() : ""});
  }
  return act;
}

nlohmann::json CorpusToJson(std::span<const RawDialogue> dialogues) {
  nlohmann::json doc = nlohmann::json::array();
  for (const RawDialogue& d : dialogues) {
    nlohmann::json turns = nlohmann::json::array();
    for (const RawTurn& t : d.turns) {
      nlohmann::json acts = nlohmann::json::array();
      for (const SystemAct& a : t.system_acts) acts.push_back(SystemActToJson(a));
      turns.push_back({{"sys_acts", std::move(acts)},
                       {"user_text", t.user_text},
                       {"constraints", t.constraints},
                       {"requests", d.requests}});
    }
    doc.push_back(std::move(turns));
  }
  return doc;
}

std::vector<RawDialogue> CorpusFromJson(const nlohmann::json& doc) {
  std::vector<RawDialogue> out;
  try {
    for (size_t k = 0; k < doc.size(); ++k) {
      const auto& turns = doc.at(k);
      if (!turns.is_array() || turns.empty()) {
        throw Error(ErrorCode::kParse, "dialogue " + std::to_string(k) + " has no turns");
      }
      RawDialogue d;
      d.id = std::to_string(k);
      for (const auto& t : turns) {
        RawTurn turn;
        for (const auto& a : t.at("sys_acts")) turn.system_acts.push_back(SystemActFromJson(a));
        turn.user_text = t.at("user_text").get<std::string>();
        turn.constraints = t.at("constraints").get<Constraints>();
        auto requests = t.at("requests").get<std::vector<std::string>>();
        if (d.turns.empty()) {
          d.requests = std::move(requests);
        } else if (requests != d.requests) {
          throw Error(ErrorCode::kParse, "dialogue " + d.id + ": requests change between turns");
        }
        d.turns.push_back(std::move(turn));
      }
      out.push_back(std::move(d));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("malformed corpus: ") + e.what());
  }
  return out;
}

void SaveCorpus(const std::string& path, std::span<const RawDialogue> dialogues) {
  WriteJsonFile(path, CorpusToJson(dialogues), 1);
}

std::vector<RawDialogue> LoadCorpus(const std::string& path) {
  return CorpusFromJson(ReadJsonFile(path));
}

CorrectionMap CorrectionMap::Parse(std::string_view text) {
  CorrectionMap map;
  std::istringstream in{std::string(text)};
  int line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const size_t tab = line.find('\t');
    if (tab == std::string::npos || tab == 0) {
      throw Error(ErrorCode::kParse, "correction line " + std::to_string(line_no));
    }
    map.map_[line.substr(0, tab)] = line.substr(tab + 1);
  }
  return map;
}

CorrectionMap CorrectionMap::Load(const fs::path& path) {
  return Parse(ReadTextFile(path.string()));
}

std::string CorrectionMap::Apply(std::string_view text, int* corrections) const {
  std::vector<std::string> words = SplitWords(SemanticDecoder::Normalize(text));
  for (std::string& w : words) {
    auto it = map_.find(w);
    if (it == map_.end()) continue;
    w = it->second;
    if (corrections) ++*corrections;
  }
  return JoinWords(words);
}

std::vector<Constraints> TransformGoalLabels(std::span<const Constraints> labels, int* warnings) {
  std::vector<Constraints> out(labels.begin(), labels.end());
  if (labels.empty()) return out;
  int vanished = 0;
  // Slots never disappear from cumulative labels; restore any that do.
  for (size_t t = 1; t < out.size(); ++t) {
    for (const auto& [slot, value] : out[t - 1]) {
      if (!out[t].count(slot)) {
        LOG(WARNING) << "slot " << slot << " vanished from labels at turn " << t;
        out[t][slot] = value;
        ++vanished;
      }
    }
  }
  for (size_t t = out.size() - 1; t-- > 0;) {
    Constraints goal = out[t + 1];
    for (const auto& [slot, value] : out[t]) goal[slot] = value;
    out[t] = std::move(goal);
  }
  if (warnings) *warnings = vanished;
  return out;
}

namespace {

bool ContainsPhrase(const std::string& text, const std::string& phrase) {
  const std::string padded = " " + text + " ";
  return padded.find(" " + phrase + " ") != std::string::npos;
}

struct CallResult {
  std::optional<RawDialogue> dialogue;
  int dropped_slots = 0;
};

CallResult ImportCall(const fs::path& dir, const std::string& id, const Ontology& ontology,
                      const CorrectionMap& corrections, const ImportOptions& options) {
  const nlohmann::json log = ReadJsonFile((dir / "log.json").string());
  const nlohmann::json label = ReadJsonFile((dir / "label.json").string());
  CallResult result;
  try {
    const auto& log_turns = log.at("turns");
    const auto& label_turns = label.at("turns");
    if (log_turns.size() != label_turns.size() || log_turns.empty()) {
      throw Error(ErrorCode::kParse, id + ": log and label turn counts differ");
    }
    RawDialogue d;
    d.id = id;
    const auto& goal = label.at("task-information").at("goal");
    for (const std::string& r : goal.value("request-slots", std::vector<std::string>{})) {
      if (ontology.IsRequestable(r)) d.requests.push_back(r);
    }
    std::sort(d.requests.begin(), d.requests.end(), [&](const auto& a, const auto& b) {
      return ontology.RequestableIndex(a) < ontology.RequestableIndex(b);
    });

    int introduced = 0;
    int missing = 0;
    Constraints previous;
    for (size_t t = 0; t < log_turns.size(); ++t) {
      RawTurn turn;
      for (const auto& a : log_turns[t].at("output").at("dialog-acts")) {
        std::string name = a.at("act").get<std::string>();
        if (auto alias = options.act_aliases.find(name); alias != options.act_aliases.end()) {
          name = alias->second;
        }
        const auto type = ParseSystemActType(name);
        if (!type) throw Error(ErrorCode::kUnknownAct, id + ": " + name);
        SystemAct act = SystemAct::Make(*type);
        for (const auto& pair : a.value("slots", nlohmann::json::array())) {
          std::string slot = pair.at(0).get<std::string>();
          std::string value = pair.size() > 1 && pair.at(1).is_string()
                                  ? pair.at(1).get<std::string>()
                                  : std::string();
          if (slot == "slot") {
            slot = value;
            value.clear();
          }
          if (slot != "name" && !ontology.IsInformable(slot) && !ontology.IsRequestable(slot)) {
            ++result.dropped_slots;
            continue;
          }
          act.payload.push_back({std::move(slot), std::move(value)});
        }
        turn.system_acts.push_back(std::move(act));
      }
      if (turn.system_acts.empty()) turn.system_acts.push_back(SystemAct::Make(SystemActType::kRepeat));
      turn.user_text = corrections.Apply(label_turns[t].value("transcription", ""));
      const nlohmann::json labels = label_turns[t].value("goal-labels", nlohmann::json::object());
      for (const auto& [slot, value] : labels.items()) {
        if (!ontology.IsInformable(slot)) continue;
        turn.constraints[slot] = value.get<std::string>();
      }
      for (const auto& [slot, value] : turn.constraints) {
        auto prev = previous.find(slot);
        if (value == kDontCare || (prev != previous.end() && prev->second == value)) continue;
        ++introduced;
        if (!ContainsPhrase(turn.user_text, SemanticDecoder::Normalize(value))) ++missing;
      }
      previous = turn.constraints;
      d.turns.push_back(std::move(turn));
    }
    if (introduced > 0 &&
        static_cast<double>(missing) / introduced > options.max_missing_value_fraction) {
      VLOG(1) << "discarding " << id << ": " << missing << "/" << introduced
              << " label values missing from transcriptions";
      return result;
    }
    result.dialogue = std::move(d);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParse, id + ": " + e.what());
  }
  return result;
}

ImportReport ImportCalls(const std::vector<std::pair<fs::path, std::string>>& calls,
                         const Ontology& ontology, const CorrectionMap& corrections,
                         const ImportOptions& options) {
  ImportReport report;
  for (const auto& [dir, id] : calls) {
    ++report.calls;
    CallResult r = ImportCall(dir, id, ontology, corrections, options);
    report.dropped_slots += r.dropped_slots;
    if (r.dialogue) {
      report.dialogues.push_back(std::move(*r.dialogue));
    } else {
      ++report.discarded;
    }
  }
  return report;
}

}  // namespace

ImportReport ImportDstc2(const fs::path& root, const Ontology& ontology,
                         const CorrectionMap& corrections, const ImportOptions& options) {
  if (!fs::is_directory(root)) throw Error(ErrorCode::kIo, "not a directory: " + root.string());
  std::vector<std::pair<fs::path, std::string>> calls;
  for (const auto& entry : fs::recursive_directory_iterator(root)) {
    if (entry.is_regular_file() && entry.path().filename() == "log.json") {
      const fs::path dir = entry.path().parent_path();
      calls.emplace_back(dir, fs::relative(dir, root).generic_string());
    }
  }
  std::sort(calls.begin(), calls.end(),
            [](const auto& a, const auto& b) { return a.second < b.second; });
  return ImportCalls(calls, ontology, corrections, options);
}

ImportReport ImportDstc2List(const fs::path& data_root, const fs::path& file_list,
                             const Ontology& ontology, const CorrectionMap& corrections,
                             const ImportOptions& options) {
  std::vector<std::pair<fs::path, std::string>> calls;
  std::istringstream in(ReadTextFile(file_list.string()));
  for (std::string line; std::getline(in, line);) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    if (line.empty()) continue;
    calls.emplace_back(data_root / line, line);
  }
  return ImportCalls(calls, ontology, corrections, options);
}

nlohmann::json CorpusStats::ToJson() const {
  return {{"n_dialogues", n_dialogues},   {"n_turns", n_turns},
          {"n_excluded", n_excluded},     {"max_turn_len", max_turn_len},
          {"max_dialogue_len", max_dialogue_len}, {"vocab_size", vocab_size}};
}

TrainingSet BuildTrainingSet(std::span<const RawDialogue> dialogues, const Ontology& ontology,
                             int max_len) {
  TrainingSet set;
  const FeatureExtractor extractor(ontology);
  const Delexicalizer delex(ontology);
  std::vector<std::vector<std::string>> targets;
  for (const RawDialogue& d : dialogues) {
    if (d.turns.empty()) throw Error(ErrorCode::kEmptyInput, "dialogue " + d.id + " has no turns");
    std::vector<Constraints> labels;
    for (const RawTurn& t : d.turns) {
      Constraints c;
      for (const auto& [slot, value] : t.constraints) {
        if (value != kDontCare) c[slot] = value;
      }
      labels.push_back(std::move(c));
    }
    const std::vector<Constraints> goals = TransformGoalLabels(labels);
    Goal goal;
    goal.requests = d.requests;
    goal.constraints = goals.front();
    ExtractorState state = extractor.InitState(goal);
    std::vector<FeatureVector> history;
    for (size_t t = 0; t < d.turns.size(); ++t) {
      goal.constraints = goals[t];
      auto [features, next] = extractor.Extract(state, d.turns[t].system_acts, goal);
      history.push_back(std::move(features));
      state = std::move(next);
      Delexicalizer::Result delexed = delex.Delexicalize(d.turns[t].user_text, max_len);
      if (delexed.too_long) {
        ++set.stats.n_excluded;
        continue;
      }
      set.stats.max_turn_len = std::max(set.stats.max_turn_len, delexed.tokens.size());
      targets.push_back(delexed.tokens);
      set.turns.push_back({history, std::move(delexed.tokens), d.id, static_cast<int>(t)});
    }
    set.stats.max_dialogue_len = std::max(set.stats.max_dialogue_len, d.turns.size());
  }
  set.vocab = Vocabulary::Build(targets);
  set.stats.n_dialogues = dialogues.size();
  set.stats.n_turns = set.turns.size();
  set.stats.vocab_size = dialogues.empty() ? 0 : set.vocab.size();
  return set;
}

std::vector<nn::Example> ToExamples(std::span<const TrainingTurn> turns, const Vocabulary& vocab) {
  std::vector<nn::Example> out;
  out.reserve(turns.size());
  for (const TrainingTurn& t : turns) {
    nn::Example ex;
    ex.history.reserve(t.history.size());
    for (const FeatureVector& v : t.history) ex.history.push_back(v.Dense());
    for (const std::string& w : t.target) {
      const int id = vocab.Id(w);
      ex.target.push_back(id < 0 ? Vocabulary::kUnk : id);
    }
    out.push_back(std::move(ex));
  }
  return out;
}

std::pair<std::vector<RawDialogue>, std::vector<RawDialogue>> SplitByDialogue(
    std::span<const RawDialogue> dialogues, double train_fraction, uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction <= 1.0)) {
    throw Error(ErrorCode::kConfig, "train fraction must be in (0, 1]");
  }
  std::vector<size_t> order(dialogues.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  Rng rng = Rng(seed).Split("split", 0);
  for (size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng.UniformIndex(i)]);
  const size_t n_train = static_cast<size_t>(train_fraction * static_cast<double>(order.size()) + 0.5);
  std::pair<std::vector<RawDialogue>, std::vector<RawDialogue>> out;
  for (size_t k = 0; k < order.size(); ++k) {
    (k < n_train ? out.first : out.second).push_back(dialogues[order[k]]);
  }
  return out;
}

std::map<std::string, double> EstimateRequestProbs(std::span<const RawDialogue> dialogues,
                                                   const Ontology& ontology) {
  std::map<std::string, double> probs;
  for (const std::string& r : ontology.requestable()) probs[r] = 0.0;
  if (dialogues.empty()) return probs;
  for (const RawDialogue& d : dialogues) {
    for (const std::string& r : d.requests) {
      if (probs.count(r)) probs[r] += 1.0;
    }
  }
  for (auto& [slot, p] : probs) p /= static_cast<double>(dialogues.size());
  return probs;
}

}  // namespace usersim
