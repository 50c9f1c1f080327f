// include/emoflow/nnet/adam.h

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

#ifndef EMOFLOW_NNET_ADAM_H_
#define EMOFLOW_NNET_ADAM_H_

#include "emoflow/base/io.h"
#include "emoflow/nnet/nnet-layers.h"

namespace emoflow {
namespace nnet {

struct AdamOptions {
  double learning_rate = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  double clip_norm = 1.0;  // global gradient norm; <= 0 disables clipping
  Json ToJson() const;
};

class Adam {
 public:
  Adam(const ParamList &params, const AdamOptions &opts);
  /// Clips, applies one update from the accumulated gradients and zeroes
  /// them.  Returns the pre-clipping gradient norm.
  double Step();
  int64_t NumSteps() const { return t_; }

 private:
  ParamList params_;
  AdamOptions opts_;
  std::vector<Matrix> m_, v_;
  int64_t t_ = 0;
};

}  // namespace nnet
}  // namespace emoflow

#endif  // EMOFLOW_NNET_ADAM_H_
