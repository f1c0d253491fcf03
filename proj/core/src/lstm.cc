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

#include "usersim/lstm.h"

#include <string>

#include "usersim/errors.h"

namespace usersim::nn {
namespace {

Eigen::VectorXd Sigmoid(const Eigen::VectorXd& x) {
  return (1.0 + (-x.array()).exp()).inverse().matrix();
}

}  // namespace

LstmParams LstmParams::Zero(int input_dim, int hidden) {
  LstmParams p;
  p.w_input = Eigen::MatrixXd::Zero(4 * hidden, input_dim);
  p.w_hidden = Eigen::MatrixXd::Zero(4 * hidden, hidden);
  p.b_input = Eigen::VectorXd::Zero(hidden);
  p.b_output = Eigen::VectorXd::Zero(hidden);
  p.b_cell = Eigen::VectorXd::Zero(hidden);
  return p;
}

void LstmParams::SetZero() {
  w_input.setZero();
  w_hidden.setZero();
  b_input.setZero();
  b_output.setZero();
  b_cell.setZero();
}

LstmState LstmState::Zero(int hidden) {
  return {Eigen::VectorXd::Zero(hidden), Eigen::VectorXd::Zero(hidden)};
}

LstmState LstmStep(const LstmParams& params, const Eigen::VectorXd& x, const LstmState& prev) {
  if (x.size() != params.input_dim() || prev.h.size() != params.hidden() ||
      prev.c.size() != params.hidden()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "lstm input " + std::to_string(x.size()) + " vs " +
                    std::to_string(params.input_dim()));
  }
  return LstmStepProjected(params, params.w_input * x, prev, nullptr);
}

LstmState LstmStepProjected(const LstmParams& params, const Eigen::VectorXd& input_projection,
                            const LstmState& prev, LstmCache* cache) {
  const Eigen::Index H = params.hidden();
  Eigen::VectorXd pre = input_projection;
  pre.noalias() += params.w_hidden * prev.h;
  pre.segment(0, H) += params.b_input;
  pre.segment(2 * H, H) += params.b_output;
  pre.segment(3 * H, H) += params.b_cell;

  Eigen::VectorXd i = Sigmoid(pre.segment(0, H));
  Eigen::VectorXd f = Sigmoid(pre.segment(H, H));
  Eigen::VectorXd o = Sigmoid(pre.segment(2 * H, H));
  Eigen::VectorXd g = pre.segment(3 * H, H).array().tanh().matrix();

  LstmState next;
  next.c = f.cwiseProduct(prev.c) + i.cwiseProduct(g);
  Eigen::VectorXd tanh_c = next.c.array().tanh().matrix();
  next.h = o.cwiseProduct(tanh_c);
  if (cache != nullptr) {
    cache->h_prev = prev.h;
    cache->c_prev = prev.c;
    cache->i = std::move(i);
    cache->f = std::move(f);
    cache->o = std::move(o);
    cache->g = std::move(g);
    cache->tanh_c = std::move(tanh_c);
  }
  return next;
}

void LstmBackward(const LstmParams& params, const LstmCache& cache, const Eigen::VectorXd& dh,
                  const Eigen::VectorXd& dc, LstmParams* grads, Eigen::VectorXd* dpre,
                  Eigen::VectorXd* dh_prev, Eigen::VectorXd* dc_prev) {
  const Eigen::Index H = params.hidden();
  const Eigen::ArrayXd tc = cache.tanh_c.array();
  const Eigen::ArrayXd dc_total =
      dc.array() + dh.array() * cache.o.array() * (1.0 - tc * tc);
  const Eigen::ArrayXd i = cache.i.array(), f = cache.f.array(), o = cache.o.array(),
                       g = cache.g.array();

  dpre->resize(4 * H);
  dpre->segment(0, H) = (dc_total * g * i * (1.0 - i)).matrix();
  dpre->segment(H, H) = (dc_total * cache.c_prev.array() * f * (1.0 - f)).matrix();
  dpre->segment(2 * H, H) = (dh.array() * tc * o * (1.0 - o)).matrix();
  dpre->segment(3 * H, H) = (dc_total * i * (1.0 - g * g)).matrix();

  grads->w_hidden.noalias() += *dpre * cache.h_prev.transpose();
  grads->b_input += dpre->segment(0, H);
  grads->b_output += dpre->segment(2 * H, H);
  grads->b_cell += dpre->segment(3 * H, H);

  dh_prev->noalias() = params.w_hidden.transpose() * *dpre;
  *dc_prev = (dc_total * f).matrix();
}

}  // namespace usersim::nn
