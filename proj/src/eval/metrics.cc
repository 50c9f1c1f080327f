// src/eval/metrics.cc

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

#include "emoflow/eval/metrics.h"

#include "emoflow/base/error.h"

namespace emoflow {

namespace {

void CheckPair(const std::vector<int> &preds, const std::vector<int> &labels) {
  if (preds.size() != labels.size())
    EMO_ERR("predictions (" << preds.size() << ") and labels (" << labels.size()
            << ") differ in length");
  for (size_t i = 0; i < preds.size(); ++i)
    if (preds[i] < 0 || preds[i] >= kNumEmotions || labels[i] < 0 || labels[i] >= kNumEmotions)
      EMO_ERR("class index out of range at position " << i);
}

}  // namespace

ConfusionMatrix ComputeConfusion(const std::vector<int> &preds, const std::vector<int> &labels) {
  CheckPair(preds, labels);
  ConfusionMatrix cm;
  for (size_t i = 0; i < preds.size(); ++i) ++cm.counts[labels[i]][preds[i]];
  return cm;
}

int64_t ConfusionMatrix::RowTotal(int truth) const {
  int64_t n = 0;
  for (int64_t c : counts[truth]) n += c;
  return n;
}

Matrix ConfusionMatrix::Normalized() const {
  Matrix m = Matrix::Zero(kNumEmotions, kNumEmotions);
  for (int i = 0; i < kNumEmotions; ++i) {
    const int64_t n = RowTotal(i);
    if (n == 0) continue;
    for (int j = 0; j < kNumEmotions; ++j)
      m(i, j) = 100.0 * static_cast<double>(counts[i][j]) / static_cast<double>(n);
  }
  return m;
}

double Uar(const std::vector<int> &preds, const std::vector<int> &labels) {
  if (labels.empty()) EMO_ERR("UAR of an empty set");
  ConfusionMatrix cm = ComputeConfusion(preds, labels);
  double sum = 0.0;
  int present = 0;
  for (int k = 0; k < kNumEmotions; ++k) {
    const int64_t n = cm.RowTotal(k);
    if (n == 0) continue;
    sum += static_cast<double>(cm.counts[k][k]) / static_cast<double>(n);
    ++present;
  }
  return 100.0 * sum / present;
}

}  // namespace emoflow
