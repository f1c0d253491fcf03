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


#ifndef USERSIM_TESTS_TEST_SUPPORT_H_
#define USERSIM_TESTS_TEST_SUPPORT_H_

#include <cmath>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "usersim/checkpoint.h"
#include "usersim/ontology.h"
#include "usersim/rng.h"
#include "usersim/seq2seq.h"
#include "usersim/semantic_decoder.h"

namespace usersim::testing {

inline std::filesystem::path DataDir() { return USERSIM_TEST_DATA_DIR; }
inline std::filesystem::path FixtureDir() { return USERSIM_TEST_FIXTURE_DIR; }

inline const Ontology& ToyOntology() {
  static const Ontology ontology = Ontology::Load(DataDir() / "toy_ontology.json");
  return ontology;
}

inline const SemanticDecoder& ToyDecoder() {
  static const SemanticDecoder decoder =
      SemanticDecoder::Load(ToyOntology(), DataDir() / "decoder_rules.txt");
  return decoder;
}

inline const nlohmann::json& Goldens() {
  static const nlohmann::json doc = ReadJsonFile((FixtureDir() / "goldens.json").string());
  return doc;
}

inline std::filesystem::path TempDir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("usersim-test-" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

// Deterministic tensor contents shared with the Python golden oracle.
inline double FillValue(int tensor, int row, int col) {
  return 0.5 * std::sin(1.3 * tensor + 0.7 * row + 0.31 * col + 0.1);
}

inline void FillDeterministic(nn::Seq2SeqParams& params) {
  int index = 0;
  params.ForEachTensor([&index](std::string_view, double* data, Eigen::Index rows,
                                Eigen::Index cols) {
    Eigen::Map<Eigen::MatrixXd> m(data, rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
      for (Eigen::Index c = 0; c < cols; ++c) {
        m(r, c) = FillValue(index, static_cast<int>(r), static_cast<int>(c));
      }
    }
    ++index;
  });
}

inline Vocabulary NumberedVocabulary(int size) {
  std::vector<std::string> tokens = {"<SOS>", "<EOS>", "<UNK>"};
  for (int i = 3; i < size; ++i) tokens.push_back("w" + std::to_string(i));
  return Vocabulary(tokens);
}

inline nn::Seq2SeqModel RandomModel(int feature_dim, int hidden, int bridge, int vocab,
                                    uint64_t seed, double scale = 0.5) {
  nn::Seq2SeqModel model =
      nn::Seq2SeqModel::Create(feature_dim, hidden, bridge, NumberedVocabulary(vocab));
  Rng rng(seed);
  model.InitUniform(rng, scale);
  return model;
}

inline Eigen::VectorXd RandomBinary(int dim, Rng& rng) {
  Eigen::VectorXd v(dim);
  for (int i = 0; i < dim; ++i) v[i] = rng.Bernoulli(0.4) ? 1.0 : 0.0;
  return v;
}

inline nn::Example RandomExample(const nn::Seq2SeqModel& model, int turns, int length, Rng& rng) {
  nn::Example ex;
  for (int t = 0; t < turns; ++t) ex.history.push_back(RandomBinary(model.dims.feature_dim, rng));
  for (int i = 0; i < length; ++i) {
    ex.target.push_back(3 + static_cast<int>(rng.UniformIndex(model.dims.vocab - 3)));
  }
  ex.target.push_back(Vocabulary::kEos);
  return ex;
}

}  // namespace usersim::testing

#endif  // USERSIM_TESTS_TEST_SUPPORT_H_
