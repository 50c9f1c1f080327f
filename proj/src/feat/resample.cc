// src/feat/resample.cc

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

#include "emoflow/feat/resample.h"

#include <cmath>

#include "emoflow/base/error.h"
#include "emoflow/base/random.h"

namespace emoflow {

Json RandomResampleOptions::ToJson() const {
  return {{"min_segment", min_segment}, {"max_segment", max_segment},
          {"min_factor", min_factor},   {"max_factor", max_factor}};
}

void RandomResampleOptions::Check() const {
  if (min_segment < 1 || max_segment < min_segment)
    EMO_ERR("bad random-resampling segment range [" << min_segment << ", "
            << max_segment << "]");
  if (!(min_factor > 0.0) || max_factor < min_factor)
    EMO_ERR("bad random-resampling factor range [" << min_factor << ", "
            << max_factor << "]");
}

int ResamplePlan::OutputLength() const {
  int n = 0;
  for (int l : out_lengths) n += l;
  return n;
}

ResamplePlan PlanRandomResample(int num_frames, uint64_t seed,
                                const RandomResampleOptions &opts) {
  opts.Check();
  if (num_frames <= 0) EMO_ERR("random resampling of an empty sequence");
  Rng rng(seed);
  ResamplePlan plan;
  int consumed = 0;
  double cumulative = 0.0;
  int emitted = 0;
  while (consumed < num_frames) {
    int len = static_cast<int>(rng.UniformInt(opts.min_segment, opts.max_segment));
    len = std::min(len, num_frames - consumed);
    double factor = opts.min_factor == opts.max_factor
                        ? opts.min_factor
                        : rng.Uniform(opts.min_factor, opts.max_factor);
    cumulative += factor * len;
    // The 1e-9 slack keeps exact products (factor 1) from rounding up.
    int boundary = static_cast<int>(std::ceil(cumulative - 1e-9));
    plan.in_lengths.push_back(len);
    plan.factors.push_back(factor);
    plan.out_lengths.push_back(boundary - emitted);
    emitted = boundary;
    consumed += len;
  }
  return plan;
}

Matrix ApplyResamplePlan(const Matrix &seq, const ResamplePlan &plan) {
  Matrix out(plan.OutputLength(), seq.cols());
  int in_pos = 0, out_pos = 0;
  for (size_t k = 0; k < plan.in_lengths.size(); ++k) {
    const int in_len = plan.in_lengths[k], out_len = plan.out_lengths[k];
    for (int j = 0; j < out_len; ++j) {
      double p = out_len == 1 ? 0.5 * (in_len - 1)
                              : static_cast<double>(j) * (in_len - 1) / (out_len - 1);
      int lo = static_cast<int>(std::floor(p));
      int hi = std::min(lo + 1, in_len - 1);
      double w = p - lo;
      if (w == 0.0)
        out.row(out_pos + j) = seq.row(in_pos + lo);
      else
        out.row(out_pos + j) = (1.0 - w) * seq.row(in_pos + lo) + w * seq.row(in_pos + hi);
    }
    in_pos += in_len;
    out_pos += out_len;
  }
  if (in_pos != seq.rows()) EMO_ERR("resample plan does not match sequence length");
  return out;
}

Matrix RandomResample(const Matrix &seq, uint64_t seed, const RandomResampleOptions &opts) {
  if (seq.rows() == 0) EMO_ERR("random resampling of an empty sequence");
  return ApplyResamplePlan(seq, PlanRandomResample(static_cast<int>(seq.rows()), seed, opts));
}

}  // namespace emoflow
