// tests/unit/metrics-test.cc

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

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "emoflow/base/error.h"
#include "emoflow/eval/metrics.h"

namespace emoflow {
namespace {

// Brute-force recall per class by scanning the pairs directly.
double OracleUar(const std::vector<int> &preds, const std::vector<int> &labels) {
  double sum = 0.0;
  int present = 0;
  for (int k = 0; k < kNumEmotions; ++k) {
    int total = 0, hit = 0;
    for (size_t i = 0; i < labels.size(); ++i) {
      if (labels[i] != k) continue;
      ++total;
      if (preds[i] == k) ++hit;
    }
    if (total == 0) continue;
    sum += static_cast<double>(hit) / total;
    ++present;
  }
  return 100.0 * sum / present;
}

TEST(MetricsTest, UarWorkedExample) {
  // A=0, H=1, S=2: recalls A 1/2, H 1, S 1.
  EXPECT_NEAR(Uar({0, 1, 1, 2}, {0, 0, 1, 2}), 100.0 * (0.5 + 1.0 + 1.0) / 3.0, 1e-9);
  EXPECT_NEAR(Uar({0, 1, 1, 2}, {0, 0, 1, 2}), 83.3333333333, 1e-6);
}

TEST(MetricsTest, ConfusionWorkedExample) {
  ConfusionMatrix cm = ComputeConfusion({1, 2}, {0, 0});
  Matrix n = cm.Normalized();
  EXPECT_DOUBLE_EQ(n(0, 0), 0.0);
  EXPECT_DOUBLE_EQ(n(0, 1), 50.0);
  EXPECT_DOUBLE_EQ(n(0, 2), 50.0);
  EXPECT_DOUBLE_EQ(n(0, 3), 0.0);
  for (int i = 1; i < kNumEmotions; ++i) EXPECT_DOUBLE_EQ(n.row(i).sum(), 0.0);
}

TEST(MetricsTest, PerfectAndConstantPredictions) {
  std::vector<int> labels = {0, 1, 2, 3, 0, 1, 2, 3};
  EXPECT_DOUBLE_EQ(Uar(labels, labels), 100.0);
  EXPECT_DOUBLE_EQ(Uar(std::vector<int>(8, 2), labels), 25.0);
}

TEST(MetricsTest, RandomCasesMatchOracle) {
  std::mt19937_64 gen(11);
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = 1 + static_cast<int>(gen() % 200);
    std::vector<int> preds(n), labels(n);
    for (int i = 0; i < n; ++i) {
      preds[i] = static_cast<int>(gen() % kNumEmotions);
      labels[i] = static_cast<int>(gen() % kNumEmotions);
    }
    const double oracle = OracleUar(preds, labels);
    ASSERT_NEAR(Uar(preds, labels), oracle, 1e-9) << "trial " << trial;

    // UAR equals the mean diagonal of the row-normalized confusion
    // matrix over the present classes.
    Matrix norm = ComputeConfusion(preds, labels).Normalized();
    double diag = 0.0;
    int present = 0;
    for (int k = 0; k < kNumEmotions; ++k) {
      bool has = false;
      for (int l : labels) has = has || l == k;
      if (!has) continue;
      diag += norm(k, k);
      ++present;
      ASSERT_NEAR(norm.row(k).sum(), 100.0, 1e-9);
    }
    ASSERT_NEAR(diag / present, oracle, 1e-9);
  }
}

TEST(MetricsTest, InvariantToSamplePermutation) {
  std::mt19937_64 gen(5);
  std::vector<int> preds(100), labels(100);
  for (int i = 0; i < 100; ++i) {
    preds[i] = static_cast<int>(gen() % 4);
    labels[i] = static_cast<int>(gen() % 4);
  }
  const double u = Uar(preds, labels);
  std::vector<int> idx(100);
  for (int i = 0; i < 100; ++i) idx[i] = i;
  std::shuffle(idx.begin(), idx.end(), gen);
  std::vector<int> p2, l2;
  for (int i : idx) {
    p2.push_back(preds[i]);
    l2.push_back(labels[i]);
  }
  EXPECT_DOUBLE_EQ(Uar(p2, l2), u);
}

TEST(MetricsTest, RejectsBadInput) {
  EXPECT_THROW(Uar({}, {}), Error);
  EXPECT_THROW(Uar({0, 1}, {0}), Error);
  EXPECT_THROW(Uar({4}, {0}), Error);
  EXPECT_THROW(ComputeConfusion({0}, {-1}), Error);
}

}  // namespace
}  // namespace emoflow
