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

#ifndef USERSIM_TRAINER_H_
#define USERSIM_TRAINER_H_

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "usersim/seq2seq.h"

namespace usersim::nn {

struct TrainConfig {
  int hidden = 100;
  int bridge = 100;
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  int batch_size = 32;
  int epochs = 20;
  // Stop after this many optimizer steps; 0 means no limit.
  int max_steps = 0;
  // Stop once the full training loss drops below this value; 0 disables.
  double target_train_loss = 0.0;
  double init_scale = 0.08;
  uint64_t seed = 1;

  nlohmann::json ToJson() const;
  static TrainConfig FromJson(const nlohmann::json& j);
};

// Adam with bias correction folded into the step size.
class AdamOptimizer {
 public:
  AdamOptimizer(const ModelDims& dims, const TrainConfig& config);

  void Step(Seq2SeqParams& params, const Seq2SeqParams& grads);
  int64_t steps() const { return t_; }

 private:
  double lr_, beta1_, beta2_, epsilon_;
  Seq2SeqParams m_, v_;
  int64_t t_ = 0;
};

struct EpochLog {
  int epoch = 0;
  int64_t steps = 0;
  double train_loss = 0.0;  // token-weighted mean of the epoch's batch losses
  double valid_loss = 0.0;
};

struct TrainResult {
  std::vector<EpochLog> epochs;
  int best_epoch = 0;
  double best_valid_loss = 0.0;
  int64_t steps = 0;
};

// Mean per-token loss over a whole set, without gradients.
double EvaluateLoss(const Seq2SeqModel& model, std::span<const Example> examples);

// Trains in place and leaves the best-on-validation parameters in the model.
// When `valid` is empty the training set stands in for it.
TrainResult Train(Seq2SeqModel& model, std::span<const Example> train,
                  std::span<const Example> valid, const TrainConfig& config,
                  const std::function<void(const EpochLog&)>& on_epoch = nullptr);

// epoch,steps,train_nats,valid_nats
std::string LossCurveCsv(const TrainResult& result);

}  // namespace usersim::nn

#endif  // USERSIM_TRAINER_H_
