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

#include "usersim/checkpoint.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "usersim/errors.h"

namespace usersim {
namespace {

constexpr const char* kModelKind = "usersim.seq2seq";

}  // namespace

std::string ReadTextFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot read " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void WriteTextFile(const std::string& path, const std::string& contents) {
  const std::filesystem::path target(path);
  if (target.has_parent_path()) std::filesystem::create_directories(target.parent_path());
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::kIo, "cannot write " + path);
    out << contents;
    if (!out.flush()) throw Error(ErrorCode::kIo, "short write to " + path);
  }
  std::filesystem::rename(tmp, target);
}

nlohmann::json ReadJsonFile(const std::string& path) {
  const std::string text = ReadTextFile(path);
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParse, path + ": " + e.what());
  }
}

void WriteJsonFile(const std::string& path, const nlohmann::json& doc, int indent) {
  WriteTextFile(path, doc.dump(indent) + "\n");
}

nlohmann::json ModelToJson(const nn::Seq2SeqModel& model, const nlohmann::json& config) {
  nlohmann::json doc;
  doc["format_version"] = kCheckpointFormatVersion;
  doc["kind"] = kModelKind;
  doc["config"] = config;
  doc["dims"] = {{"feature_dim", model.dims.feature_dim},
                 {"hidden", model.dims.hidden},
                 {"bridge", model.dims.bridge},
                 {"vocab", model.dims.vocab}};
  doc["vocab"] = model.vocab.tokens();
  nlohmann::json tensors = nlohmann::json::object();
  model.params.ForEachTensor(
      [&tensors](std::string_view name, const double* data, Eigen::Index rows, Eigen::Index cols) {
        // Row-major so the text reads like the matrix.
        std::vector<double> values;
        values.reserve(static_cast<size_t>(rows * cols));
        for (Eigen::Index r = 0; r < rows; ++r) {
          for (Eigen::Index c = 0; c < cols; ++c) values.push_back(data[c * rows + r]);
        }
        tensors[std::string(name)] = {{"shape", {rows, cols}}, {"data", std::move(values)}};
      });
  doc["tensors"] = std::move(tensors);
  return doc;
}

nn::Seq2SeqModel ModelFromJson(const nlohmann::json& doc, nlohmann::json* config) {
  try {
    if (doc.at("kind").get<std::string>() != kModelKind) {
      throw Error(ErrorCode::kParse, "not a seq2seq checkpoint");
    }
    const int version = doc.at("format_version").get<int>();
    if (version != kCheckpointFormatVersion) {
      throw Error(ErrorCode::kParse, "unsupported checkpoint version " + std::to_string(version));
    }
    const auto& dims = doc.at("dims");
    Vocabulary vocab(doc.at("vocab").get<std::vector<std::string>>());
    nn::Seq2SeqModel model =
        nn::Seq2SeqModel::Create(dims.at("feature_dim").get<int>(), dims.at("hidden").get<int>(),
                                 dims.at("bridge").get<int>(), std::move(vocab));
    if (model.dims.vocab != dims.at("vocab").get<int>()) {
      throw Error(ErrorCode::kDimensionMismatch, "vocabulary size disagrees with dims");
    }
    const auto& tensors = doc.at("tensors");
    model.params.ForEachTensor(
        [&tensors](std::string_view name, double* data, Eigen::Index rows, Eigen::Index cols) {
          const auto& t = tensors.at(std::string(name));
          const auto shape = t.at("shape").get<std::vector<Eigen::Index>>();
          if (shape.size() != 2 || shape[0] != rows || shape[1] != cols) {
            throw Error(ErrorCode::kDimensionMismatch, "tensor " + std::string(name));
          }
          const auto& values = t.at("data");
          if (values.size() != static_cast<size_t>(rows * cols)) {
            throw Error(ErrorCode::kDimensionMismatch, "tensor data " + std::string(name));
          }
          size_t k = 0;
          for (Eigen::Index r = 0; r < rows; ++r) {
            for (Eigen::Index c = 0; c < cols; ++c) data[c * rows + r] = values[k++].get<double>();
          }
        });
    if (config) *config = doc.value("config", nlohmann::json::object());
    return model;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("malformed checkpoint: ") + e.what());
  }
}

void SaveModel(const std::string& path, const nn::Seq2SeqModel& model,
               const nlohmann::json& config) {
  WriteJsonFile(path, ModelToJson(model, config));
}

nn::Seq2SeqModel LoadModel(const std::string& path, nlohmann::json* config) {
  return ModelFromJson(ReadJsonFile(path), config);
}

}  // namespace usersim
