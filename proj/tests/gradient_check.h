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


#ifndef USERSIM_TESTS_GRADIENT_CHECK_H_
#define USERSIM_TESTS_GRADIENT_CHECK_H_

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "test_support.h"
#include "usersim/seq2seq.h"

namespace usersim::testing {

struct GradientCheckResult {
  // Worst relative error per tensor name.
  std::map<std::string, double> max_rel_error;
  double worst = 0.0;
  size_t checked = 0;
};

// Central differences on every parameter of the model against BatchLoss
// gradients. Relative error |a - n| / max(|a| + |n|, floor).
inline GradientCheckResult CheckGradients(nn::Seq2SeqModel model,
                                          const std::vector<nn::Example>& batch,
                                          double step = 1e-5, double floor = 1e-6) {
  nn::Seq2SeqParams grads = nn::Seq2SeqParams::Zero(model.dims);
  nn::BatchLoss(model, batch, &grads);
  std::vector<std::pair<std::string, std::vector<double>>> analytic;
  grads.ForEachTensor([&](std::string_view name, const double* data, Eigen::Index rows,
                          Eigen::Index cols) {
    analytic.emplace_back(std::string(name), std::vector<double>(data, data + rows * cols));
  });
  GradientCheckResult result;
  size_t tensor = 0;
  model.params.ForEachTensor([&](std::string_view name, double* data, Eigen::Index rows,
                                 Eigen::Index cols) {
    double& worst = result.max_rel_error[std::string(name)];
    for (Eigen::Index k = 0; k < rows * cols; ++k) {
      const double saved = data[k];
      data[k] = saved + step;
      const double up = nn::BatchLoss(model, batch, nullptr).loss;
      data[k] = saved - step;
      const double down = nn::BatchLoss(model, batch, nullptr).loss;
      data[k] = saved;
      const double numeric = (up - down) / (2 * step);
      const double a = analytic[tensor].second[static_cast<size_t>(k)];
      const double rel = std::abs(a - numeric) / std::max(std::abs(a) + std::abs(numeric), floor);
      worst = std::max(worst, rel);
      ++result.checked;
    }
    result.worst = std::max(result.worst, worst);
    ++tensor;
  });
  return result;
}

// Width 8, vocabulary 20, three-turn histories.
inline std::vector<nn::Example> GradientCheckBatch(const nn::Seq2SeqModel& model, uint64_t seed) {
  Rng rng(seed);
  std::vector<nn::Example> batch;
  batch.push_back(RandomExample(model, 3, 4, rng));
  batch.push_back(RandomExample(model, 3, 2, rng));
  return batch;
}

inline nn::Seq2SeqModel GradientCheckModel(uint64_t seed) {
  return RandomModel(/*feature_dim=*/12, /*hidden=*/8, /*bridge=*/8, /*vocab=*/20, seed, 0.5);
}

}  // namespace usersim::testing

#endif  // USERSIM_TESTS_GRADIENT_CHECK_H_
