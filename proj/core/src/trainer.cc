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

#include "usersim/trainer.h"

#include <cmath>
#include <limits>
#include <sstream>
#include <type_traits>

#include <glog/logging.h>

#include "usersim/errors.h"

namespace usersim::nn {
namespace {

template <typename T>
struct TensorRef {
  T* data;
  size_t size;
};

template <typename Params, typename T = std::conditional_t<std::is_const_v<Params>,
                                                             const double, double>>
std::vector<TensorRef<T>> Tensors(Params& params) {
  std::vector<TensorRef<T>> refs;
  params.ForEachTensor([&refs](std::string_view, T* data, Eigen::Index rows, Eigen::Index cols) {
    refs.push_back({data, static_cast<size_t>(rows * cols)});
  });
  return refs;
}

std::vector<const Example*> Pointers(std::span<const Example> examples) {
  std::vector<const Example*> out;
  out.reserve(examples.size());
  for (const Example& ex : examples) out.push_back(&ex);
  return out;
}

}  // namespace

nlohmann::json TrainConfig::ToJson() const {
  return {{"hidden", hidden},
          {"bridge", bridge},
          {"learning_rate", learning_rate},
          {"beta1", beta1},
          {"beta2", beta2},
          {"epsilon", epsilon},
          {"batch_size", batch_size},
          {"epochs", epochs},
          {"max_steps", max_steps},
          {"target_train_loss", target_train_loss},
          {"init_scale", init_scale},
          {"seed", seed}};
}

TrainConfig TrainConfig::FromJson(const nlohmann::json& j) {
  TrainConfig c;
  c.hidden = j.value("hidden", c.hidden);
  c.bridge = j.value("bridge", c.bridge);
  c.learning_rate = j.value("learning_rate", c.learning_rate);
  c.beta1 = j.value("beta1", c.beta1);
  c.beta2 = j.value("beta2", c.beta2);
  c.epsilon = j.value("epsilon", c.epsilon);
  c.batch_size = j.value("batch_size", c.batch_size);
  c.epochs = j.value("epochs", c.epochs);
  c.max_steps = j.value("max_steps", c.max_steps);
  c.target_train_loss = j.value("target_train_loss", c.target_train_loss);
  c.init_scale = j.value("init_scale", c.init_scale);
  c.seed = j.value("seed", c.seed);
  if (c.hidden <= 0 || c.bridge <= 0 || c.batch_size <= 0 || c.epochs <= 0) {
    throw Error(ErrorCode::kConfig, "train config sizes must be positive");
  }
  if (!(c.learning_rate > 0.0)) throw Error(ErrorCode::kConfig, "learning_rate must be > 0");
  return c;
}

AdamOptimizer::AdamOptimizer(const ModelDims& dims, const TrainConfig& config)
    : lr_(config.learning_rate),
      beta1_(config.beta1),
      beta2_(config.beta2),
      epsilon_(config.epsilon),
      m_(Seq2SeqParams::Zero(dims)),
      v_(Seq2SeqParams::Zero(dims)) {}

void AdamOptimizer::Step(Seq2SeqParams& params, const Seq2SeqParams& grads) {
  ++t_;
  const double lr_t = lr_ * std::sqrt(1.0 - std::pow(beta2_, static_cast<double>(t_))) /
                      (1.0 - std::pow(beta1_, static_cast<double>(t_)));
  const auto p = Tensors(params);
  const auto g = Tensors(grads);
  const auto m = Tensors(m_);
  const auto v = Tensors(v_);
  for (size_t k = 0; k < p.size(); ++k) {
    if (p[k].size != g[k].size) throw Error(ErrorCode::kDimensionMismatch, "gradient shape");
    for (size_t i = 0; i < p[k].size; ++i) {
      const double gi = g[k].data[i];
      double& mi = m[k].data[i];
      double& vi = v[k].data[i];
      mi = beta1_ * mi + (1.0 - beta1_) * gi;
      vi = beta2_ * vi + (1.0 - beta2_) * gi * gi;
      p[k].data[i] -= lr_t * mi / (std::sqrt(vi) + epsilon_);
    }
  }
}

double EvaluateLoss(const Seq2SeqModel& model, std::span<const Example> examples) {
  if (examples.empty()) throw Error(ErrorCode::kEmptyInput, "empty example set");
  return BatchLoss(model, examples, nullptr).loss;
}

TrainResult Train(Seq2SeqModel& model, std::span<const Example> train,
                  std::span<const Example> valid, const TrainConfig& config,
                  const std::function<void(const EpochLog&)>& on_epoch) {
  if (train.empty()) throw Error(ErrorCode::kEmptyInput, "empty training corpus");
  if (valid.empty()) valid = train;
  const std::vector<const Example*> examples = Pointers(train);
  Rng shuffle_rng = Rng(config.seed).Split("shuffle", 0);
  AdamOptimizer adam(model.dims, config);
  Seq2SeqParams grads = Seq2SeqParams::Zero(model.dims);

  TrainResult result;
  result.best_valid_loss = std::numeric_limits<double>::infinity();
  Seq2SeqParams best = model.params;
  std::vector<size_t> order(examples.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::vector<const Example*> batch;
  bool stop = false;

  for (int epoch = 1; epoch <= config.epochs && !stop; ++epoch) {
    for (size_t i = order.size(); i > 1; --i) {
      std::swap(order[i - 1], order[shuffle_rng.UniformIndex(i)]);
    }
    double epoch_nll = 0.0;
    size_t epoch_tokens = 0;
    for (size_t start = 0; start < order.size(); start += config.batch_size) {
      batch.clear();
      const size_t end = std::min(order.size(), start + config.batch_size);
      for (size_t i = start; i < end; ++i) batch.push_back(examples[order[i]]);
      const LossResult loss = BatchLoss(model, batch, &grads);
      adam.Step(model.params, grads);
      epoch_nll += loss.total_nll;
      epoch_tokens += loss.num_tokens;
      if (config.max_steps > 0 && adam.steps() >= config.max_steps) {
        stop = true;
        break;
      }
    }
    EpochLog log;
    log.epoch = epoch;
    log.steps = adam.steps();
    log.train_loss = epoch_nll / static_cast<double>(epoch_tokens);
    log.valid_loss = EvaluateLoss(model, valid);
    if (!std::isfinite(log.valid_loss) || !AllFinite(model.params)) {
      throw Error(ErrorCode::kInvalidState, "training diverged at epoch " + std::to_string(epoch));
    }
    if (log.valid_loss < result.best_valid_loss) {
      result.best_valid_loss = log.valid_loss;
      result.best_epoch = epoch;
      best = model.params;
    }
    VLOG(1) << "epoch " << epoch << " steps " << log.steps << " train " << log.train_loss
            << " valid " << log.valid_loss;
    result.epochs.push_back(log);
    if (on_epoch) on_epoch(log);
    if (config.target_train_loss > 0.0) {
      const double full = valid.data() == train.data() ? log.valid_loss
                                                       : EvaluateLoss(model, train);
      if (full < config.target_train_loss) stop = true;
    }
  }
  model.params = std::move(best);
  result.steps = adam.steps();
  return result;
}

std::string LossCurveCsv(const TrainResult& result) {
  std::ostringstream out;
  out.precision(17);
  out << "epoch,steps,train_nats,valid_nats\n";
  for (const EpochLog& e : result.epochs) {
    out << e.epoch << ',' << e.steps << ',' << e.train_loss << ',' << e.valid_loss << '\n';
  }
  return out.str();
}

}  // namespace usersim::nn
