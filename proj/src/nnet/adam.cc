// src/nnet/adam.cc

// Copyright 2026  Emoflow Authors

// See the top-level LICENSE file for clarification regarding multiple authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "emoflow/nnet/adam.h"

#include <cmath>

#include "emoflow/base/error.h"

namespace emoflow {
namespace nnet {

Json AdamOptions::ToJson() const {
  return {{"learning_rate", learning_rate}, {"beta1", beta1}, {"beta2", beta2},
          {"epsilon", epsilon}, {"clip_norm", clip_norm}};
}

Adam::Adam(const ParamList &params, const AdamOptions &opts) : params_(params), opts_(opts) {
  if (opts.learning_rate < 0.0) EMO_ERR("negative learning rate");
  for (const Param *p : params_) {
    m_.push_back(Matrix::Zero(p->value.rows(), p->value.cols()));
    v_.push_back(Matrix::Zero(p->value.rows(), p->value.cols()));
  }
}

double Adam::Step() {
  const double norm = GradNorm(params_);
  if (!std::isfinite(norm)) EMO_ERR("non-finite gradient norm at step " << t_ + 1);
  double scale = 1.0;
  if (opts_.clip_norm > 0.0 && norm > opts_.clip_norm) scale = opts_.clip_norm / norm;
  ++t_;
  const double c1 = 1.0 - std::pow(opts_.beta1, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(opts_.beta2, static_cast<double>(t_));
  for (size_t k = 0; k < params_.size(); ++k) {
    Param *p = params_[k];
    Matrix g = p->grad * scale;
    m_[k] = opts_.beta1 * m_[k] + (1.0 - opts_.beta1) * g;
    v_[k] = opts_.beta2 * v_[k] + (1.0 - opts_.beta2) * g.cwiseProduct(g);
    p->value.array() -= opts_.learning_rate * (m_[k].array() / c1) /
                        ((v_[k].array() / c2).sqrt() + opts_.epsilon);
    p->ZeroGrad();
  }
  return norm;
}

}  // namespace nnet
}  // namespace emoflow
