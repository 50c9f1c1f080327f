// include/emoflow/feat/resample.h

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

#ifndef EMOFLOW_FEAT_RESAMPLE_H_
#define EMOFLOW_FEAT_RESAMPLE_H_

#include <cstdint>
#include <vector>

#include "emoflow/base/io.h"
#include "emoflow/base/types.h"

namespace emoflow {

struct RandomResampleOptions {
  int min_segment = 19;  // frames
  int max_segment = 32;
  double min_factor = 0.5;
  double max_factor = 1.5;

  Json ToJson() const;
  void Check() const;
};

// Segment lengths and stretch factors drawn for one sequence.  Output
// segment boundaries are ceil of the cumulative stretched length, so the
// total output length is ceil(sum(factor_k * length_k)), which lies in
// [ceil(min_factor * T), floor(max_factor * T) + 1].
struct ResamplePlan {
  std::vector<int> in_lengths;
  std::vector<double> factors;
  std::vector<int> out_lengths;

  int OutputLength() const;
};

ResamplePlan PlanRandomResample(int num_frames, uint64_t seed,
                                const RandomResampleOptions &opts);

// Each segment is linearly interpolated along time onto its output length
// with endpoints aligned, so every output row is a convex combination of
// two adjacent input rows of the same segment.
Matrix ApplyResamplePlan(const Matrix &seq, const ResamplePlan &plan);

/// Throws on an empty sequence.
Matrix RandomResample(const Matrix &seq, uint64_t seed,
                      const RandomResampleOptions &opts = {});

}  // namespace emoflow

#endif  // EMOFLOW_FEAT_RESAMPLE_H_
