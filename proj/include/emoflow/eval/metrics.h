// include/emoflow/eval/metrics.h

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

#ifndef EMOFLOW_EVAL_METRICS_H_
#define EMOFLOW_EVAL_METRICS_H_

#include <array>
#include <vector>

#include "emoflow/base/types.h"
#include "emoflow/ingest/manifest.h"

namespace emoflow {

// Labels and predictions are class indices 0..3 (A, H, S, N).

/// Unweighted average recall in percent: the mean per-class recall over
/// the classes present in `labels`.  Throws on length mismatch or empty
/// input.
double Uar(const std::vector<int> &preds, const std::vector<int> &labels);

struct ConfusionMatrix {
  std::array<std::array<int64_t, kNumEmotions>, kNumEmotions> counts{};  // [truth][pred]

  /// Row-normalized percentages; rows without samples are all zero.
  Matrix Normalized() const;
  int64_t RowTotal(int truth) const;
};

ConfusionMatrix ComputeConfusion(const std::vector<int> &preds, const std::vector<int> &labels);

}  // namespace emoflow

#endif  // EMOFLOW_EVAL_METRICS_H_
