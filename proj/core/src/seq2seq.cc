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

#include "usersim/seq2seq.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <string>

#include "usersim/errors.h"

namespace usersim::nn {
namespace {

Eigen::VectorXd LogSoftmax(const Eigen::VectorXd& logits) {
  const double m = logits.maxCoeff();
  const double lse = m + std::log((logits.array() - m).exp().sum());
  return (logits.array() - lse).matrix();
}

void CheckToken(const Seq2SeqModel& model, int token) {
  if (token < 0 || token >= model.dims.vocab) {
    throw Error(ErrorCode::kUnknownToken, "token id " + std::to_string(token));
  }
}

void CheckFeature(const Seq2SeqModel& model, const Eigen::VectorXd& x) {
  if (x.size() != model.dims.feature_dim) {
    throw Error(ErrorCode::kDimensionMismatch, "feature vector of size " +
                                                   std::to_string(x.size()) + ", expected " +
                                                   std::to_string(model.dims.feature_dim));
  }
}

// Negative log-likelihood of one example; accumulates scale * gradient into
// grads when it is non-null.
double ForwardBackward(const Seq2SeqModel& model, const Example& ex, double scale,
                       Seq2SeqParams* grads) {
  const Seq2SeqParams& P = model.params;
  const int H = model.dims.hidden;
  const int B = model.dims.bridge;
  if (ex.history.empty()) throw Error(ErrorCode::kEmptyInput, "empty feature history");
  if (ex.target.empty()) throw Error(ErrorCode::kEmptyInput, "empty target");

  const size_t T = ex.history.size();
  std::vector<LstmCache> enc_cache(grads ? T : 0);
  LstmState enc = LstmState::Zero(H);
  for (size_t t = 0; t < T; ++t) {
    CheckFeature(model, ex.history[t]);
    enc = LstmStepProjected(P.encoder, P.encoder.w_input * ex.history[t], enc,
                            grads ? &enc_cache[t] : nullptr);
  }
  const Eigen::VectorXd p = P.bridge_w * enc.h + P.bridge_b;
  const Eigen::VectorXd p_projection = P.decoder.w_input.rightCols(B) * p;

  const size_t L = ex.target.size();
  std::vector<LstmCache> dec_cache(grads ? L : 0);
  std::vector<Eigen::VectorXd> probs(grads ? L : 0);
  std::vector<Eigen::VectorXd> hidden(grads ? L : 0);
  LstmState dec = LstmState::Zero(H);
  int previous = Vocabulary::kSos;
  double nll = 0.0;
  for (size_t k = 0; k < L; ++k) {
    const int target = ex.target[k];
    CheckToken(model, target);
    dec = LstmStepProjected(P.decoder, p_projection + P.decoder.w_input.col(previous), dec,
                            grads ? &dec_cache[k] : nullptr);
    const Eigen::VectorXd log_probs = LogSoftmax(P.out_w * dec.h + P.out_b);
    nll -= log_probs[target];
    if (grads) {
      probs[k] = log_probs.array().exp().matrix();
      hidden[k] = dec.h;
    }
    previous = target;
  }
  if (!grads) return nll;

  Eigen::VectorXd dh_next = Eigen::VectorXd::Zero(H);
  Eigen::VectorXd dc_next = Eigen::VectorXd::Zero(H);
  Eigen::VectorXd dpre_sum = Eigen::VectorXd::Zero(4 * H);
  Eigen::VectorXd dpre, dh_prev, dc_prev;
  for (size_t k = L; k-- > 0;) {
    Eigen::VectorXd dlogits = probs[k];
    dlogits[ex.target[k]] -= 1.0;
    dlogits *= scale;
    grads->out_w.noalias() += dlogits * hidden[k].transpose();
    grads->out_b += dlogits;
    Eigen::VectorXd dh = dh_next;
    dh.noalias() += P.out_w.transpose() * dlogits;
    LstmBackward(P.decoder, dec_cache[k], dh, dc_next, &grads->decoder, &dpre, &dh_prev,
                 &dc_prev);
    const int input_word = k == 0 ? Vocabulary::kSos : ex.target[k - 1];
    grads->decoder.w_input.col(input_word) += dpre;
    dpre_sum += dpre;
    dh_next = dh_prev;
    dc_next = dc_prev;
  }
  grads->decoder.w_input.rightCols(B).noalias() += dpre_sum * p.transpose();
  const Eigen::VectorXd dp = P.decoder.w_input.rightCols(B).transpose() * dpre_sum;
  grads->bridge_w.noalias() += dp * enc.h.transpose();
  grads->bridge_b += dp;

  Eigen::VectorXd dh = P.bridge_w.transpose() * dp;
  Eigen::VectorXd dc = Eigen::VectorXd::Zero(H);
  for (size_t t = T; t-- > 0;) {
    LstmBackward(P.encoder, enc_cache[t], dh, dc, &grads->encoder, &dpre, &dh_prev, &dc_prev);
    grads->encoder.w_input.noalias() += dpre * ex.history[t].transpose();
    dh = dh_prev;
    dc = dc_prev;
  }
  return nll;
}

}  // namespace

Seq2SeqParams Seq2SeqParams::Zero(const ModelDims& dims) {
  Seq2SeqParams p;
  p.encoder = LstmParams::Zero(dims.feature_dim, dims.hidden);
  p.bridge_w = Eigen::MatrixXd::Zero(dims.bridge, dims.hidden);
  p.bridge_b = Eigen::VectorXd::Zero(dims.bridge);
  p.decoder = LstmParams::Zero(dims.vocab + dims.bridge, dims.hidden);
  p.out_w = Eigen::MatrixXd::Zero(dims.vocab, dims.hidden);
  p.out_b = Eigen::VectorXd::Zero(dims.vocab);
  return p;
}

void Seq2SeqParams::SetZero() {
  ForEachTensor([](std::string_view, double* data, Eigen::Index rows, Eigen::Index cols) {
    std::fill(data, data + rows * cols, 0.0);
  });
}

uint64_t ParamChecksum(const Seq2SeqParams& params) {
  uint64_t h = 0xcbf29ce484222325ULL;
  params.ForEachTensor([&h](std::string_view, const double* data, Eigen::Index rows,
                            Eigen::Index cols) {
    const auto* bytes = reinterpret_cast<const unsigned char*>(data);
    for (size_t i = 0; i < static_cast<size_t>(rows * cols) * sizeof(double); ++i) {
      h ^= bytes[i];
      h *= 0x100000001b3ULL;
    }
  });
  return h;
}

bool AllFinite(const Seq2SeqParams& params) {
  bool finite = true;
  params.ForEachTensor([&finite](std::string_view, const double* data, Eigen::Index rows,
                                 Eigen::Index cols) {
    for (Eigen::Index i = 0; i < rows * cols; ++i) finite &= std::isfinite(data[i]);
  });
  return finite;
}

Seq2SeqModel Seq2SeqModel::Create(int feature_dim, int hidden, int bridge, Vocabulary vocab) {
  if (feature_dim <= 0 || hidden <= 0 || bridge <= 0) {
    throw Error(ErrorCode::kConfig, "model dimensions must be positive");
  }
  Seq2SeqModel model;
  model.dims = {feature_dim, hidden, bridge, static_cast<int>(vocab.size())};
  model.params = Seq2SeqParams::Zero(model.dims);
  model.vocab = std::move(vocab);
  return model;
}

void Seq2SeqModel::InitUniform(Rng& rng, double scale) {
  params.ForEachTensor([&](std::string_view, double* data, Eigen::Index rows, Eigen::Index cols) {
    for (Eigen::Index i = 0; i < rows * cols; ++i) {
      data[i] = (2.0 * rng.UniformDouble() - 1.0) * scale;
    }
  });
}

Eigen::VectorXd EncodeHistory(const Seq2SeqModel& model,
                              std::span<const Eigen::VectorXd> history) {
  if (history.empty()) throw Error(ErrorCode::kEmptyInput, "empty feature history");
  HistoryEncoder encoder(model);
  for (const Eigen::VectorXd& v : history) encoder.Push(v);
  return encoder.Encoding();
}

HistoryEncoder::HistoryEncoder(const Seq2SeqModel& model)
    : model_(model), state_(LstmState::Zero(model.dims.hidden)) {}

void HistoryEncoder::Push(const Eigen::VectorXd& features) {
  CheckFeature(model_, features);
  state_ = LstmStepProjected(model_.params.encoder, model_.params.encoder.w_input * features,
                             state_, nullptr);
  ++length_;
}

Eigen::VectorXd HistoryEncoder::Encoding() const {
  if (length_ == 0) throw Error(ErrorCode::kEmptyInput, "empty feature history");
  return model_.params.bridge_w * state_.h + model_.params.bridge_b;
}

DecoderStepper::DecoderStepper(const Seq2SeqModel& model, const Eigen::VectorXd& p)
    : model_(model) {
  if (p.size() != model.dims.bridge) {
    throw Error(ErrorCode::kDimensionMismatch, "encoding size " + std::to_string(p.size()));
  }
  p_projection_ = model.params.decoder.w_input.rightCols(model.dims.bridge) * p;
}

LstmState DecoderStepper::InitialState() const { return LstmState::Zero(model_.dims.hidden); }

Eigen::VectorXd DecoderStepper::StepLogProbs(int previous_token, LstmState& state) const {
  CheckToken(model_, previous_token);
  const Seq2SeqParams& P = model_.params;
  state = LstmStepProjected(P.decoder, p_projection_ + P.decoder.w_input.col(previous_token),
                            state, nullptr);
  return LogSoftmax(P.out_w * state.h + P.out_b);
}

Eigen::VectorXd DecoderDistribution(const Seq2SeqModel& model, const Eigen::VectorXd& p,
                                    std::span<const int> prefix) {
  DecoderStepper stepper(model, p);
  LstmState state = stepper.InitialState();
  std::vector<int> inputs;
  if (prefix.empty() || prefix.front() != Vocabulary::kSos) inputs.push_back(Vocabulary::kSos);
  inputs.insert(inputs.end(), prefix.begin(), prefix.end());
  Eigen::VectorXd log_probs;
  for (int token : inputs) log_probs = stepper.StepLogProbs(token, state);
  return log_probs.array().exp().matrix();
}

double SequenceLogProb(const Seq2SeqModel& model, const Eigen::VectorXd& p,
                       std::span<const int> tokens) {
  DecoderStepper stepper(model, p);
  LstmState state = stepper.InitialState();
  int previous = Vocabulary::kSos;
  double total = 0.0;
  for (int token : tokens) {
    CheckToken(model, token);
    total += stepper.StepLogProbs(previous, state)[token];
    previous = token;
  }
  return total;
}

LossResult BatchLoss(const Seq2SeqModel& model, std::span<const Example* const> batch,
                     Seq2SeqParams* grads) {
  if (batch.empty()) throw Error(ErrorCode::kEmptyInput, "empty batch");
  LossResult result;
  for (const Example* ex : batch) result.num_tokens += ex->target.size();
  if (grads) {
    if (grads->out_w.rows() != model.dims.vocab) *grads = Seq2SeqParams::Zero(model.dims);
    grads->SetZero();
  }
  const double scale = 1.0 / static_cast<double>(result.num_tokens);
  for (const Example* ex : batch) result.total_nll += ForwardBackward(model, *ex, scale, grads);
  result.loss = result.total_nll * scale;
  return result;
}

LossResult BatchLoss(const Seq2SeqModel& model, std::span<const Example> batch,
                     Seq2SeqParams* grads) {
  std::vector<const Example*> pointers;
  pointers.reserve(batch.size());
  for (const Example& ex : batch) pointers.push_back(&ex);
  return BatchLoss(model, std::span<const Example* const>(pointers), grads);
}

}  // namespace usersim::nn
