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

#ifndef USERSIM_SEQ2SEQ_H_
#define USERSIM_SEQ2SEQ_H_

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "usersim/lstm.h"
#include "usersim/rng.h"
#include "usersim/vocabulary.h"

namespace usersim::nn {

struct ModelDims {
  int feature_dim = 0;
  int hidden = 100;
  int bridge = 100;
  int vocab = 0;

  bool operator==(const ModelDims&) const = default;
};

// Encoder LSTM over feature vectors, a linear bridge p = Wp h + bp, and a
// decoder LSTM whose input is [one-hot(previous word), p]. The decoder's
// input weight matrix holds the word columns first, then the p columns.
struct Seq2SeqParams {
  LstmParams encoder;
  Eigen::MatrixXd bridge_w;  // P x H
  Eigen::VectorXd bridge_b;  // P
  LstmParams decoder;
  Eigen::MatrixXd out_w;  // V x H
  Eigen::VectorXd out_b;  // V

  static Seq2SeqParams Zero(const ModelDims& dims);
  void SetZero();

  // Visits every tensor as (name, data, rows, cols) in a fixed order.
  template <typename F>
  void ForEachTensor(F&& f) {
    VisitAll(*this, f);
  }
  template <typename F>
  void ForEachTensor(F&& f) const {
    VisitAll(*this, f);
  }

 private:
  template <typename Self, typename F>
  static void VisitAll(Self& self, F& f) {
    auto visit = [&f](std::string_view name, auto& t) { f(name, t.data(), t.rows(), t.cols()); };
    visit("encoder.w_input", self.encoder.w_input);
    visit("encoder.w_hidden", self.encoder.w_hidden);
    visit("encoder.b_input", self.encoder.b_input);
    visit("encoder.b_output", self.encoder.b_output);
    visit("encoder.b_cell", self.encoder.b_cell);
    visit("bridge.w", self.bridge_w);
    visit("bridge.b", self.bridge_b);
    visit("decoder.w_input", self.decoder.w_input);
    visit("decoder.w_hidden", self.decoder.w_hidden);
    visit("decoder.b_input", self.decoder.b_input);
    visit("decoder.b_output", self.decoder.b_output);
    visit("decoder.b_cell", self.decoder.b_cell);
    visit("output.w", self.out_w);
    visit("output.b", self.out_b);
  }
};

// FNV-1a over the raw bytes of every tensor.
uint64_t ParamChecksum(const Seq2SeqParams& params);
bool AllFinite(const Seq2SeqParams& params);

struct Seq2SeqModel {
  ModelDims dims;
  Seq2SeqParams params;
  Vocabulary vocab;

  // All-zero parameters.
  static Seq2SeqModel Create(int feature_dim, int hidden, int bridge, Vocabulary vocab);
  // Every parameter drawn from uniform(-scale, scale).
  void InitUniform(Rng& rng, double scale = 0.08);
};

// One training or evaluation pair: the feature history up to a user turn and
// the target token ids ending in <EOS>.
struct Example {
  std::vector<Eigen::VectorXd> history;
  std::vector<int> target;
};

// p after consuming the whole history. Throws kEmptyInput /
// kDimensionMismatch.
Eigen::VectorXd EncodeHistory(const Seq2SeqModel& model, std::span<const Eigen::VectorXd> history);

// Incremental encoder: each Push consumes one more feature vector.
class HistoryEncoder {
 public:
  explicit HistoryEncoder(const Seq2SeqModel& model);

  void Push(const Eigen::VectorXd& features);
  Eigen::VectorXd Encoding() const;
  size_t length() const { return length_; }

 private:
  const Seq2SeqModel& model_;
  LstmState state_;
  size_t length_ = 0;
};

// Decoder state for a fixed p; Step feeds the previous word and returns the
// log-distribution over the next one.
class DecoderStepper {
 public:
  DecoderStepper(const Seq2SeqModel& model, const Eigen::VectorXd& p);

  LstmState InitialState() const;
  Eigen::VectorXd StepLogProbs(int previous_token, LstmState& state) const;

 private:
  const Seq2SeqModel& model_;
  Eigen::VectorXd p_projection_;
};

// P(next word | prefix, p). <SOS> is prepended when the prefix does not
// start with it. Throws kUnknownToken for out-of-range ids.
Eigen::VectorXd DecoderDistribution(const Seq2SeqModel& model, const Eigen::VectorXd& p,
                                    std::span<const int> prefix);

// log P(tokens | p) for a target ending in <EOS>, accumulated step by step.
double SequenceLogProb(const Seq2SeqModel& model, const Eigen::VectorXd& p,
                       std::span<const int> tokens);

struct LossResult {
  double loss = 0.0;  // mean negative log-likelihood per target token
  double total_nll = 0.0;
  size_t num_tokens = 0;
};

// Teacher-forced loss over a batch. When grads is non-null it is overwritten
// with d(loss)/d(params).
LossResult BatchLoss(const Seq2SeqModel& model, std::span<const Example* const> batch,
                     Seq2SeqParams* grads);
LossResult BatchLoss(const Seq2SeqModel& model, std::span<const Example> batch,
                     Seq2SeqParams* grads);

}  // namespace usersim::nn

#endif  // USERSIM_SEQ2SEQ_H_
