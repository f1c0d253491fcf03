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

#ifndef USERSIM_BEAM_SEARCH_H_
#define USERSIM_BEAM_SEARCH_H_

#include <vector>

#include <Eigen/Core>

#include "usersim/rng.h"
#include "usersim/seq2seq.h"

namespace usersim::nn {

// Chooses successor words for one beam.
class TokenSampler {
 public:
  virtual ~TokenSampler() = default;

  // Returns min(n, |V|) distinct token ids drawn from exp(log_probs).
  virtual std::vector<int> Draw(const Eigen::VectorXd& log_probs, int n) = 0;
};

// Sequential sampling without replacement from the model distribution.
class RandomTokenSampler : public TokenSampler {
 public:
  explicit RandomTokenSampler(Rng& rng) : rng_(rng) {}
  std::vector<int> Draw(const Eigen::VectorXd& log_probs, int n) override;

 private:
  Rng& rng_;
};

// The n most probable words; ties go to the lower id.
class ArgmaxTokenSampler : public TokenSampler {
 public:
  std::vector<int> Draw(const Eigen::VectorXd& log_probs, int n) override;
};

inline constexpr int kDefaultBeams = 2;
inline constexpr int kDefaultMaxDecodeLength = 30;

// Beam search with sampled successors. Each step draws n_beams words from
// every live beam, then keeps the n_beams highest cumulative log-probability
// hypotheses among the new candidates and the finished beams. Returns the
// best finished hypothesis, ending in <EOS>; when none finishes within
// max_len words the best live one is terminated with <EOS>.
std::vector<int> GenerateBeamSample(const Seq2SeqModel& model, const Eigen::VectorXd& p,
                                    int n_beams, int max_len, TokenSampler& sampler);
std::vector<int> GenerateBeamSample(const Seq2SeqModel& model, const Eigen::VectorXd& p,
                                    int n_beams, int max_len, Rng& rng);

// Argmax at every step, same termination rule.
std::vector<int> GreedyDecode(const Seq2SeqModel& model, const Eigen::VectorXd& p, int max_len);

}  // namespace usersim::nn

#endif  // USERSIM_BEAM_SEARCH_H_
