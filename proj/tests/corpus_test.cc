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


#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "test_support.h"
#include "usersim/corpus.h"
#include "usersim/delexicalize.h"
#include "usersim/errors.h"
#include "usersim/semantic_decoder.h"
#include "usersim/synthesize.h"

namespace usersim {
namespace {

using testing::ToyOntology;
using Words = std::vector<std::string>;

TEST(DelexicalizeTest, Examples) {
  const Delexicalizer delex(ToyOntology());
  EXPECT_EQ(delex.Delexicalize("im looking for eritrean food in the south").tokens,
            (Words{"im", "looking", "for", "<value_food>", "food", "in", "the", "<value_area>",
                   "<EOS>"}));
  EXPECT_EQ(delex.Delexicalize("hello").tokens, (Words{"hello", "<EOS>"}));
  EXPECT_EQ(delex.Delexicalize("north american food in the north").tokens,
            (Words{"<value_food>", "food", "in", "the", "<value_area>", "<EOS>"}));
  EXPECT_EQ(delex.Delexicalize("is la tasca cheap").tokens,
            (Words{"is", "<name>", "<value_pricerange>", "<EOS>"}));
}

TEST(DelexicalizeTest, LengthLimitFlagsTurn) {
  const Delexicalizer delex(ToyOntology());
  std::string text;
  for (int i = 0; i < 21; ++i) text += "word ";
  EXPECT_FALSE(delex.Delexicalize(text).too_long);
  EXPECT_TRUE(delex.Delexicalize(text + "extra").too_long);
  EXPECT_TRUE(delex.Delexicalize("a b", 2).too_long);
  EXPECT_FALSE(delex.Delexicalize("a", 2).too_long);
}

TEST(DelexicalizeTest, LexicalizeFillsFromGoalAndVenue) {
  Goal g;
  g.constraints = {{"food", "north american"}, {"area", "south"}};
  const Words tokens = {"is", "<name>", "<value_food>", "in", "the", "<value_area>",
                        "<value_pricerange>", "<UNK>", "<EOS>"};
  const LexicalizeResult r = Lexicalize(tokens, g, std::string("la tasca"));
  EXPECT_EQ(r.text, "is la tasca north american in the south any");
  EXPECT_EQ(r.unfilled_slots, 1);
  EXPECT_EQ(r.unknown_tokens, 1);
}

// Strips the delexicalizer's normalization from a text so both sides compare.
std::string Normalized(const std::string& text) {
  return JoinWords(SplitWords(SemanticDecoder::Normalize(text)));
}

TEST(DelexicalizeTest, PropertyInverseOverSyntheticCorpus) {
  const Ontology& o = ToyOntology();
  const Delexicalizer delex(o);
  const auto corpus = SynthesizeCorpus(o, 200, 17);
  size_t checked = 0;
  for (const RawDialogue& d : corpus) {
    std::vector<Constraints> labels;
    for (const RawTurn& t : d.turns) labels.push_back(t.constraints);
    const auto goals = TransformGoalLabels(labels);
    for (size_t t = 0; t < d.turns.size(); ++t) {
      const auto result = delex.Delexicalize(d.turns[t].user_text);
      Goal g;
      g.constraints = goals[t];
      // Constraints the user has not stated yet are taken from earlier turns.
      for (const auto& [slot, value] : d.turns[t].constraints) g.constraints[slot] = value;
      const LexicalizeResult back = Lexicalize(result.tokens, g, std::nullopt);
      if (back.unfilled_slots > 0) continue;
      EXPECT_EQ(back.text, Normalized(d.turns[t].user_text)) << d.id << " turn " << t;
      ++checked;
    }
  }
  EXPECT_GT(checked, 1000u);
}

TEST(TransformGoalLabelsTest, GoalChangeExample) {
  const std::vector<Constraints> in = {
      {{"food", "eritrean"}},
      {{"area", "south"}, {"food", "eritrean"}},
      {{"area", "south"}, {"food", "spanish"}},
      {{"area", "south"}, {"food", "spanish"}, {"pricerange", "cheap"}},
  };
  const Constraints eritrean = {{"area", "south"}, {"food", "eritrean"}, {"pricerange", "cheap"}};
  const Constraints spanish = {{"area", "south"}, {"food", "spanish"}, {"pricerange", "cheap"}};
  EXPECT_EQ(TransformGoalLabels(in),
            (std::vector<Constraints>{eritrean, eritrean, spanish, spanish}));
}

TEST(TransformGoalLabelsTest, TrivialCases) {
  const std::vector<Constraints> single = {{{"food", "thai"}}};
  EXPECT_EQ(TransformGoalLabels(single), single);
  const std::vector<Constraints> steady = {
      {{"food", "thai"}}, {{"food", "thai"}, {"area", "north"}}, {{"food", "thai"}, {"area", "north"}}};
  for (const Constraints& row : TransformGoalLabels(steady)) EXPECT_EQ(row, steady.back());
  EXPECT_TRUE(TransformGoalLabels(std::vector<Constraints>{}).empty());
}

TEST(TransformGoalLabelsTest, VanishingSlotIsRetainedWithWarning) {
  const std::vector<Constraints> in = {{{"food", "thai"}, {"area", "north"}}, {{"food", "thai"}}};
  int warnings = 0;
  const auto out = TransformGoalLabels(in, &warnings);
  EXPECT_EQ(warnings, 1);
  EXPECT_EQ(out[0], in[0]);
  EXPECT_EQ(out[1].at("area"), "north");
}

std::vector<Constraints> RandomCumulativeLabels(Rng& rng) {
  const Ontology& o = ToyOntology();
  std::vector<Constraints> labels;
  Constraints current;
  const int turns = 1 + static_cast<int>(rng.UniformIndex(8));
  for (int t = 0; t < turns; ++t) {
    for (const auto& slot : o.informable()) {
      if (rng.Bernoulli(0.3)) current[slot.name] = slot.values[rng.UniformIndex(slot.values.size())];
    }
    labels.push_back(current);
  }
  return labels;
}

TEST(TransformGoalLabelsTest, PropertyIdempotentAndBackwardConsistent) {
  Rng rng(77);
  for (int trial = 0; trial < 500; ++trial) {
    const auto in = RandomCumulativeLabels(rng);
    const auto out = TransformGoalLabels(in);
    ASSERT_EQ(out.size(), in.size());
    EXPECT_EQ(TransformGoalLabels(out), out);
    EXPECT_EQ(out.back(), in.back());
    for (size_t t = 0; t + 1 < out.size(); ++t) {
      for (const auto& [slot, value] : out[t + 1]) {
        ASSERT_TRUE(out[t].count(slot));
        if (out[t].at(slot) != value) {
          ASSERT_TRUE(in[t].count(slot));
          EXPECT_EQ(out[t].at(slot), in[t].at(slot));
        }
      }
      EXPECT_EQ(out[t].size(), out[t + 1].size());
    }
  }
}

TEST(CorrectionMapTest, ReplacesWholeWords) {
  const CorrectionMap map = CorrectionMap::Parse("# comment\nchineese\tchinese\ncenter\tcentre\n");
  EXPECT_EQ(map.size(), 2u);
  int n = 0;
  EXPECT_EQ(map.Apply("Chineese food in the CENTER", &n), "chinese food in the centre");
  EXPECT_EQ(n, 2);
  EXPECT_EQ(map.Apply("centerpiece"), "centerpiece");
  EXPECT_THROW(CorrectionMap::Parse("no tab here\n"), Error);
  EXPECT_GT(CorrectionMap::Load(testing::DataDir() / "corrections.txt").size(), 5u);
}

RawDialogue TableDialogue() {
  RawDialogue d;
  d.id = "table";
  d.requests = {"phone"};
  const auto turn = [](std::vector<SystemAct> acts, std::string text, Constraints c) {
    return RawTurn{std::move(acts), std::move(text), std::move(c)};
  };
  d.turns = {
      turn({SystemAct::Make(SystemActType::kWelcomeMsg)}, "im looking for eritrean food",
           {{"food", "eritrean"}}),
      turn({SystemAct::Slot(SystemActType::kRequest, "area")}, "in the south",
           {{"area", "south"}, {"food", "eritrean"}}),
      turn({SystemAct::Pairs(SystemActType::kCantHelp, {{"food", "eritrean"}, {"area", "south"}})},
           "how about spanish food", {{"area", "south"}, {"food", "spanish"}}),
      turn({SystemAct::Slot(SystemActType::kRequest, "pricerange")}, "cheap",
           {{"area", "south"}, {"food", "spanish"}, {"pricerange", "cheap"}}),
  };
  return d;
}

TEST(BuildTrainingSetTest, TableDialogue) {
  const std::vector<RawDialogue> corpus = {TableDialogue()};
  const TrainingSet set = BuildTrainingSet(corpus, ToyOntology());
  ASSERT_EQ(set.turns.size(), 4u);
  for (size_t t = 0; t < 4; ++t) {
    EXPECT_EQ(set.turns[t].turn, static_cast<int>(t));
    ASSERT_EQ(set.turns[t].history.size(), t + 1);
    EXPECT_EQ(set.turns[t].history.back().c, (std::vector<uint8_t>{1, 1, 1}));
    EXPECT_EQ(set.turns[t].target.back(), "<EOS>");
    for (const auto& w : set.turns[t].target) EXPECT_GE(set.vocab.Id(w), 0) << w;
  }
  EXPECT_EQ(set.turns[0].target,
            (Words{"im", "looking", "for", "<value_food>", "food", "<EOS>"}));
  EXPECT_EQ(set.stats.n_dialogues, 1u);
  EXPECT_EQ(set.stats.n_turns, 4u);
  EXPECT_EQ(set.stats.max_dialogue_len, 4u);
  EXPECT_EQ(set.stats.max_turn_len, 6u);
  EXPECT_EQ(set.vocab.Id("<SOS>"), Vocabulary::kSos);
  const auto examples = ToExamples(set.turns, set.vocab);
  ASSERT_EQ(examples.size(), 4u);
  EXPECT_EQ(examples[3].history.size(), 4u);
  EXPECT_EQ(examples[3].target.back(), Vocabulary::kEos);
}

TEST(BuildTrainingSetTest, EmptyInput) {
  const TrainingSet set = BuildTrainingSet(std::vector<RawDialogue>{}, ToyOntology());
  EXPECT_TRUE(set.turns.empty());
  EXPECT_EQ(set.stats.n_dialogues, 0u);
  EXPECT_EQ(set.stats.n_turns, 0u);
  EXPECT_EQ(set.stats.max_turn_len, 0u);
}

TEST(CorpusTest, JsonRoundTripAndSplit) {
  const auto corpus = SynthesizeCorpus(ToyOntology(), 40, 3);
  const auto dir = testing::TempDir("corpus");
  SaveCorpus((dir / "c.json").string(), corpus);
  EXPECT_EQ(LoadCorpus((dir / "c.json").string()), corpus);
  const auto [train, valid] = SplitByDialogue(corpus, 0.75, 9);
  EXPECT_EQ(train.size(), 30u);
  EXPECT_EQ(valid.size(), 10u);
  std::set<std::string> ids;
  for (const auto& d : train) ids.insert(d.id);
  for (const auto& d : valid) ids.insert(d.id);
  EXPECT_EQ(ids.size(), 40u);
  EXPECT_EQ(SplitByDialogue(corpus, 0.75, 9).first, train);
  EXPECT_THROW(SplitByDialogue(corpus, 0.0, 9), Error);
}

TEST(CorpusTest, RequestProbabilitiesAreFrequencies) {
  RawDialogue a = TableDialogue(), b = TableDialogue();
  b.requests = {"phone", "addr"};
  const std::vector<RawDialogue> corpus = {a, b};
  const auto p = EstimateRequestProbs(corpus, ToyOntology());
  EXPECT_DOUBLE_EQ(p.at("phone"), 1.0);
  EXPECT_DOUBLE_EQ(p.at("addr"), 0.5);
  EXPECT_DOUBLE_EQ(p.at("name"), 0.0);
}

// Writes one call in the DSTC2 directory layout from a compact description:
// [{"acts": [...], "text": "...", "labels": {...}}, ...].
void WriteCall(const std::filesystem::path& dir, std::string_view turns_json,
               const std::vector<std::string>& requests) {
  std::filesystem::create_directories(dir);
  nlohmann::json log = {{"turns", nlohmann::json::array()}};
  nlohmann::json label = {{"turns", nlohmann::json::array()}};
  label["task-information"]["goal"]["request-slots"] = requests;
  for (const auto& turn : nlohmann::json::parse(turns_json)) {
    nlohmann::json log_turn, label_turn;
    log_turn["output"]["dialog-acts"] = turn.at("acts");
    label_turn["transcription"] = turn.at("text");
    label_turn["goal-labels"] = turn.at("labels");
    log["turns"].push_back(log_turn);
    label["turns"].push_back(label_turn);
  }
  std::ofstream(dir / "log.json") << log.dump();
  std::ofstream(dir / "label.json") << label.dump();
}

std::filesystem::path ThreeCallFixture() {
  const auto root = testing::TempDir("dstc2");
  WriteCall(root / "day1" / "call-a", R"([
      {"acts": [{"act": "welcomemsg", "slots": []}], "text": "i want chineese food",
       "labels": {"food": "chinese"}},
      {"acts": [{"act": "request", "slots": [["slot", "area"]]}], "text": "in the south",
       "labels": {"food": "chinese", "area": "south"}}])",
            {"phone"});
  WriteCall(root / "day1" / "call-b", R"([
      {"acts": [{"act": "welcomemsg", "slots": []}], "text": "cheap restaurant",
       "labels": {"pricerange": "cheap"}},
      {"acts": [{"act": "canthelp.exception", "slots": [["name", "x"]]},
                {"act": "offer", "slots": [["name", "la tasca"], ["signature", "y"]]}],
       "text": "whats the address", "labels": {"pricerange": "cheap"}}])",
            {"addr", "phone"});
  WriteCall(root / "day2" / "call-c", R"([
      {"acts": [{"act": "welcomemsg", "slots": []}], "text": "italian food",
       "labels": {"food": "italian"}}])",
            {});
  return root;
}

TEST(ImportDstc2Test, SyntheticThreeCallDirectory) {
  const auto root = ThreeCallFixture();
  const CorrectionMap corrections = CorrectionMap::Parse("chineese\tchinese\n");
  const ImportReport report = ImportDstc2(root, ToyOntology(), corrections);
  EXPECT_EQ(report.calls, 3);
  EXPECT_EQ(report.discarded, 0);
  ASSERT_EQ(report.dialogues.size(), 3u);
  const RawDialogue& a = report.dialogues[0];
  EXPECT_EQ(a.id, "day1/call-a");
  EXPECT_EQ(a.turns[0].user_text, "i want chinese food");
  EXPECT_EQ(a.turns[1].system_acts, (std::vector<SystemAct>{SystemAct::Slot(SystemActType::kRequest, "area")}));
  EXPECT_EQ(a.turns[1].constraints, (Constraints{{"food", "chinese"}, {"area", "south"}}));
  EXPECT_EQ(a.requests, (Words{"phone"}));
  const RawDialogue& b = report.dialogues[1];
  EXPECT_EQ(b.requests, (Words{"phone", "addr"}));
  EXPECT_EQ(b.turns[1].system_acts[0].type, SystemActType::kCantHelp);
  EXPECT_EQ(report.dropped_slots, 1);

  const auto list = root / "list.flist";
  std::ofstream(list) << "day2/call-c\nday1/call-a\n";
  const ImportReport listed = ImportDstc2List(root, list, ToyOntology(), corrections);
  ASSERT_EQ(listed.dialogues.size(), 2u);
  EXPECT_EQ(listed.dialogues[0].id, "day2/call-c");
}

TEST(ImportDstc2Test, DiscardsUncorrectableCalls) {
  const auto root = ThreeCallFixture();
  const ImportReport report = ImportDstc2(root, ToyOntology(), CorrectionMap());
  EXPECT_EQ(report.calls, 3);
  EXPECT_EQ(report.discarded, 1);
  EXPECT_EQ(report.dialogues.size(), 2u);
}

TEST(ImportDstc2Test, UnknownActNamesTheCall) {
  const auto root = testing::TempDir("dstc2-bad");
  WriteCall(root / "call-z", R"([{"acts": [{"act": "frobnicate"}], "text": "hello", "labels": {}}])",
            {});
  try {
    ImportDstc2(root, ToyOntology(), CorrectionMap());
    FAIL() << "expected UnknownAct";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnknownAct);
    EXPECT_NE(std::string(e.what()).find("call-z"), std::string::npos);
  }
  EXPECT_THROW(ImportDstc2(root / "missing", ToyOntology(), CorrectionMap()), Error);
}

TEST(SynthesizeTest, Deterministic) {
  const auto a = SynthesizeCorpus(ToyOntology(), 1, 5);
  const auto b = SynthesizeCorpus(ToyOntology(), 1, 5);
  ASSERT_EQ(a.size(), 1u);
  EXPECT_EQ(a, b);
  EXPECT_NE(SynthesizeCorpus(ToyOntology(), 1, 6), a);
}

TEST(SynthesizeTest, PropertyCorpusInvariants) {
  const Ontology& o = ToyOntology();
  const auto corpus = SynthesizeCorpus(o, 2000, 11);
  ASSERT_EQ(corpus.size(), 2000u);
  size_t changes = 0;
  for (const RawDialogue& d : corpus) {
    ASSERT_FALSE(d.turns.empty());
    ASSERT_FALSE(d.requests.empty());
    std::vector<Constraints> labels;
    bool canthelp_seen = false;
    for (size_t t = 0; t < d.turns.size(); ++t) {
      const RawTurn& turn = d.turns[t];
      for (const SystemAct& act : turn.system_acts) {
        if (act.type == SystemActType::kCantHelp) canthelp_seen = true;
      }
      if (t > 0) {
        for (const auto& [slot, value] : d.turns[t - 1].constraints) {
          ASSERT_TRUE(turn.constraints.count(slot)) << d.id << " lost " << slot;
          if (turn.constraints.at(slot) != value) {
            ++changes;
            EXPECT_TRUE(canthelp_seen) << d.id << " changed " << slot << " without canthelp";
          }
        }
      }
      labels.push_back(turn.constraints);
    }
    int warnings = 0;
    TransformGoalLabels(labels, &warnings);
    EXPECT_EQ(warnings, 0);
  }
  EXPECT_GT(changes, 0u);
  const TrainingSet set = BuildTrainingSet(corpus, o);
  EXPECT_LE(set.stats.max_turn_len, 22u);
  EXPECT_EQ(set.stats.n_excluded, 0u);
  EXPECT_EQ(set.stats.n_dialogues, 2000u);
}

}  // namespace
}  // namespace usersim
