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

// Microbenchmarks for the hot paths of simulation and training.

#include <filesystem>
#include <string>
#include <vector>

#include <benchmark/benchmark.h>
#include <Eigen/Core>

#include "usersim/abus.h"
#include "usersim/beam_search.h"
#include "usersim/dialogue_manager.h"
#include "usersim/harness.h"
#include "usersim/lstm.h"
#include "usersim/ontology.h"
#include "usersim/rng.h"
#include "usersim/semantic_decoder.h"
#include "usersim/seq2seq.h"
#include "usersim/vocabulary.h"

namespace usersim {
namespace {

const std::filesystem::path kDataDir = USERSIM_BENCH_DATA_DIR;

const Ontology& BenchOntology() {
  static const Ontology ontology = Ontology::Load(kDataDir / "toy_ontology.json");
  return ontology;
}

Eigen::VectorXd RandomVector(int n, Rng& rng) {
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = rng.UniformDouble() - 0.5;
  return v;
}

nn::Seq2SeqModel BenchModel(int hidden, int vocab_size) {
  std::vector<std::string> words;
  for (int i = 0; i < vocab_size - 3; ++i) words.push_back("w" + std::to_string(i));
  nn::Seq2SeqModel model =
      nn::Seq2SeqModel::Create(36, hidden, hidden, Vocabulary::Build(std::vector<std::vector<std::string>>{words}));
  Rng rng(7);
  model.InitUniform(rng, 0.08);
  return model;
}

void BM_LstmStep(benchmark::State& state) {
  const int hidden = static_cast<int>(state.range(0));
  Rng rng(1);
  nn::LstmParams params = nn::LstmParams::Zero(hidden, hidden);
  params.w_input = Eigen::MatrixXd::Random(4 * hidden, hidden) * 0.1;
  params.w_hidden = Eigen::MatrixXd::Random(4 * hidden, hidden) * 0.1;
  const Eigen::VectorXd x = RandomVector(hidden, rng);
  nn::LstmState s = nn::LstmState::Zero(hidden);
  for (auto _ : state) {
    s = nn::LstmStep(params, x, s);
    benchmark::DoNotOptimize(s.h.data());
  }
}
BENCHMARK(BM_LstmStep)->Arg(50)->Arg(100)->Arg(200);

void BM_BatchLoss(benchmark::State& state) {
  const nn::Seq2SeqModel model = BenchModel(100, 200);
  Rng rng(2);
  std::vector<nn::Example> batch(static_cast<size_t>(state.range(0)));
  for (nn::Example& ex : batch) {
    for (int t = 0; t < 6; ++t) {
      Eigen::VectorXd f = Eigen::VectorXd::Zero(model.dims.feature_dim);
      for (int i = 0; i < f.size(); ++i) f[i] = rng.Bernoulli(0.2);
      ex.history.push_back(f);
    }
    for (int k = 0; k < 9; ++k) ex.target.push_back(3 + static_cast<int>(rng.UniformIndex(197)));
    ex.target.push_back(Vocabulary::kEos);
  }
  nn::Seq2SeqParams grads = nn::Seq2SeqParams::Zero(model.dims);
  for (auto _ : state) {
    benchmark::DoNotOptimize(nn::BatchLoss(model, batch, &grads).loss);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_BatchLoss)->Arg(1)->Arg(32);

void BM_BeamSample(benchmark::State& state) {
  const nn::Seq2SeqModel model = BenchModel(100, 200);
  Rng rng(3);
  const Eigen::VectorXd p = RandomVector(model.dims.bridge, rng);
  nn::RandomTokenSampler sampler(rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(nn::GenerateBeamSample(model, p, static_cast<int>(state.range(0)),
                                                    nn::kDefaultMaxDecodeLength, sampler));
  }
}
BENCHMARK(BM_BeamSample)->Arg(1)->Arg(2)->Arg(4);

void BM_DecoderParse(benchmark::State& state) {
  const SemanticDecoder decoder =
      SemanticDecoder::Load(BenchOntology(), kDataDir / "decoder_rules.txt");
  const std::vector<std::string> texts = {
      "im looking for a cheap restaurant in the south part of town",
      "what is the phone number and address",
      "how about spanish food",
      "thank you goodbye",
  };
  size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(decoder.Parse(texts[i++ % texts.size()]));
  }
}
BENCHMARK(BM_DecoderParse);

void BM_AbusDialogue(benchmark::State& state) {
  const Ontology& o = BenchOntology();
  const SemanticDecoder decoder = SemanticDecoder::Load(o, kDataDir / "decoder_rules.txt");
  const CachingDecoder cached(decoder);
  const DialogueEnv env{&o, &cached, nullptr};
  ScriptedAgent system(o);
  AgendaSimulator abus(o);
  uint64_t i = 0;
  for (auto _ : state) {
    Rng rng = Rng(4).Split(i++);
    benchmark::DoNotOptimize(RunDialogue(system, abus, env, rng).success);
  }
}
BENCHMARK(BM_AbusDialogue);

}  // namespace
}  // namespace usersim

BENCHMARK_MAIN();
