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

#ifndef USERSIM_CHECKPOINT_H_
#define USERSIM_CHECKPOINT_H_

#include <string>

#include <nlohmann/json.hpp>

#include "usersim/seq2seq.h"

namespace usersim {

inline constexpr int kCheckpointFormatVersion = 1;

// Whole-file helpers. Throw kIo / kParse.
std::string ReadTextFile(const std::string& path);
void WriteTextFile(const std::string& path, const std::string& contents);
nlohmann::json ReadJsonFile(const std::string& path);
void WriteJsonFile(const std::string& path, const nlohmann::json& doc, int indent = -1);

// {format_version, kind, config, dims, vocab, tensors: {name: {shape, data}}}.
// Doubles are written with round-trip precision.
nlohmann::json ModelToJson(const nn::Seq2SeqModel& model, const nlohmann::json& config);
nn::Seq2SeqModel ModelFromJson(const nlohmann::json& doc, nlohmann::json* config = nullptr);

void SaveModel(const std::string& path, const nn::Seq2SeqModel& model,
               const nlohmann::json& config);
nn::Seq2SeqModel LoadModel(const std::string& path, nlohmann::json* config = nullptr);

}  // namespace usersim

#endif  // USERSIM_CHECKPOINT_H_
