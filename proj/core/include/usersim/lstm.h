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

#ifndef USERSIM_LSTM_H_
#define USERSIM_LSTM_H_

#include <Eigen/Core>

namespace usersim::nn {

// Single-layer LSTM without peepholes and without a forget-gate bias.
// Gate rows of the weight matrices are ordered [input, forget, output, cell].
//
//   i = sigm(Wi x + Ui h + bi)      f = sigm(Wf x + Uf h)
//   o = sigm(Wo x + Uo h + bo)      g = tanh(Wg x + Ug h + bg)
//   c' = f * c + i * g              h' = o * tanh(c')
struct LstmParams {
  Eigen::MatrixXd w_input;   // 4H x D
  Eigen::MatrixXd w_hidden;  // 4H x H
  Eigen::VectorXd b_input;   // H
  Eigen::VectorXd b_output;  // H
  Eigen::VectorXd b_cell;    // H

  static LstmParams Zero(int input_dim, int hidden);
  int input_dim() const { return static_cast<int>(w_input.cols()); }
  int hidden() const { return static_cast<int>(w_hidden.cols()); }
  void SetZero();
};

struct LstmState {
  Eigen::VectorXd h;
  Eigen::VectorXd c;

  static LstmState Zero(int hidden);
};

// Activations kept for the backward pass.
struct LstmCache {
  Eigen::VectorXd h_prev, c_prev;
  Eigen::VectorXd i, f, o, g;
  Eigen::VectorXd tanh_c;
};

// One step from the raw input x. Throws kDimensionMismatch.
LstmState LstmStep(const LstmParams& params, const Eigen::VectorXd& x, const LstmState& prev);

// One step given the input projection W x (4H); the hidden projection and
// biases are added here. `cache` may be null.
LstmState LstmStepProjected(const LstmParams& params, const Eigen::VectorXd& input_projection,
                            const LstmState& prev, LstmCache* cache);

// Backward through one step. Accumulates into grads->w_hidden and the bias
// gradients, writes the pre-activation gradient (4H) so the caller can
// accumulate the input weights, and the gradients flowing to the previous
// state.
void LstmBackward(const LstmParams& params, const LstmCache& cache, const Eigen::VectorXd& dh,
                  const Eigen::VectorXd& dc, LstmParams* grads, Eigen::VectorXd* dpre,
                  Eigen::VectorXd* dh_prev, Eigen::VectorXd* dc_prev);

}  // namespace usersim::nn

#endif  // USERSIM_LSTM_H_
