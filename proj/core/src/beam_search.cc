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

#include "usersim/beam_search.h"

#include <algorithm>
#include <numeric>
#include <string>

#include "usersim/errors.h"

namespace usersim::nn {
namespace {

struct Hypothesis {
  std::vector<int> tokens;
  double score = 0.0;
  bool finished = false;
  LstmState state;
  Eigen::VectorXd next_log_probs;
};

void CheckArgs(int n_beams, int max_len) {
  if (n_beams < 1) throw Error(ErrorCode::kConfig, "n_beams must be >= 1");
  if (max_len < 1) throw Error(ErrorCode::kConfig, "max_len must be >= 1");
}

}  // namespace

std::vector<int> RandomTokenSampler::Draw(const Eigen::VectorXd& log_probs, int n) {
  Eigen::VectorXd weights = log_probs.array().exp().matrix();
  const int count = std::min<int>(n, static_cast<int>(weights.size()));
  std::vector<int> drawn;
  drawn.reserve(count);
  for (int k = 0; k < count; ++k) {
    const double total = weights.sum();
    int pick = -1;
    if (total > 0.0) {
      double u = rng_.UniformDouble() * total;
      for (Eigen::Index j = 0; j < weights.size(); ++j) {
        if (weights[j] <= 0.0) continue;
        pick = static_cast<int>(j);
        if (u < weights[j]) break;
        u -= weights[j];
      }
    }
    if (pick < 0) {
      // Remaining mass underflowed; take the lowest unused id.
      for (Eigen::Index j = 0; j < weights.size(); ++j) {
        if (std::find(drawn.begin(), drawn.end(), j) == drawn.end()) {
          pick = static_cast<int>(j);
          break;
        }
      }
    }
    drawn.push_back(pick);
    weights[pick] = 0.0;
  }
  return drawn;
}

std::vector<int> ArgmaxTokenSampler::Draw(const Eigen::VectorXd& log_probs, int n) {
  std::vector<int> ids(static_cast<size_t>(log_probs.size()));
  std::iota(ids.begin(), ids.end(), 0);
  const int count = std::min<int>(n, static_cast<int>(ids.size()));
  std::partial_sort(ids.begin(), ids.begin() + count, ids.end(), [&](int a, int b) {
    return log_probs[a] > log_probs[b] || (log_probs[a] == log_probs[b] && a < b);
  });
  ids.resize(count);
  return ids;
}

std::vector<int> GenerateBeamSample(const Seq2SeqModel& model, const Eigen::VectorXd& p,
                                    int n_beams, int max_len, TokenSampler& sampler) {
  CheckArgs(n_beams, max_len);
  DecoderStepper stepper(model, p);
  std::vector<Hypothesis> beams(1);
  beams[0].state = stepper.InitialState();
  beams[0].next_log_probs = stepper.StepLogProbs(Vocabulary::kSos, beams[0].state);

  for (int step = 0; step < max_len; ++step) {
    std::vector<Hypothesis> pool;
    for (const Hypothesis& beam : beams) {
      if (beam.finished) pool.push_back(beam);
    }
    for (const Hypothesis& beam : beams) {
      if (beam.finished) continue;
      for (int word : sampler.Draw(beam.next_log_probs, n_beams)) {
        Hypothesis next;
        next.tokens = beam.tokens;
        next.tokens.push_back(word);
        next.score = beam.score + beam.next_log_probs[word];
        next.finished = word == Vocabulary::kEos;
        next.state = beam.state;
        pool.push_back(std::move(next));
      }
    }
    std::stable_sort(pool.begin(), pool.end(), [](const Hypothesis& a, const Hypothesis& b) {
      return a.score > b.score;
    });
    if (pool.size() > static_cast<size_t>(n_beams)) pool.resize(n_beams);
    bool all_finished = true;
    for (Hypothesis& h : pool) {
      if (h.finished) continue;
      all_finished = false;
      if (step + 1 < max_len) h.next_log_probs = stepper.StepLogProbs(h.tokens.back(), h.state);
    }
    beams = std::move(pool);
    if (all_finished) break;
  }

  // Beams are sorted by score; prefer the best finished one.
  for (const Hypothesis& h : beams) {
    if (h.finished) return h.tokens;
  }
  std::vector<int> forced = beams.front().tokens;
  forced.push_back(Vocabulary::kEos);
  return forced;
}

std::vector<int> GenerateBeamSample(const Seq2SeqModel& model, const Eigen::VectorXd& p,
                                    int n_beams, int max_len, Rng& rng) {
  RandomTokenSampler sampler(rng);
  return GenerateBeamSample(model, p, n_beams, max_len, sampler);
}

std::vector<int> GreedyDecode(const Seq2SeqModel& model, const Eigen::VectorXd& p, int max_len) {
  CheckArgs(1, max_len);
  DecoderStepper stepper(model, p);
  LstmState state = stepper.InitialState();
  std::vector<int> tokens;
  int previous = Vocabulary::kSos;
  for (int step = 0; step < max_len; ++step) {
    const Eigen::VectorXd log_probs = stepper.StepLogProbs(previous, state);
    Eigen::Index best = 0;
    log_probs.maxCoeff(&best);
    previous = static_cast<int>(best);
    tokens.push_back(previous);
    if (previous == Vocabulary::kEos) return tokens;
  }
  tokens.push_back(Vocabulary::kEos);
  return tokens;
}

}  // namespace usersim::nn
