// src/ingest/split.cc

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

#include "emoflow/ingest/split.h"

#include <cmath>
#include <map>
#include <sstream>

#include "emoflow/base/error.h"
#include "emoflow/base/random.h"

namespace emoflow {

SplitRatios ParseSplitRatios(const std::string &text) {
  std::stringstream ss(text);
  std::string item;
  std::vector<double> v;
  while (std::getline(ss, item, ',')) {
    try {
      size_t used = 0;
      v.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception &) {
      EMO_USAGE_ERR("bad split ratio '" << item << "'");
    }
  }
  if (v.size() != 3) EMO_USAGE_ERR("expected three comma-separated ratios, got '" << text << "'");
  return {v[0], v[1], v[2]};
}

CorpusManifest SplitCorpus(const CorpusManifest &manifest, const SplitRatios &ratios,
                           uint64_t seed) {
  if (ratios.train < 0 || ratios.valid < 0 || ratios.test < 0 ||
      std::abs(ratios.train + ratios.valid + ratios.test - 1.0) > 1e-6)
    EMO_ERR("split ratios must be nonnegative and sum to 1");
  std::vector<std::string> speakers = manifest.Speakers();
  const int n = static_cast<int>(speakers.size());
  if (n < 3) EMO_ERR("speaker-disjoint split needs at least 3 speakers, got " << n);

  Rng rng(DeriveSeed(seed, "split"));
  rng.Shuffle(&speakers);

  int n_valid = std::max(1, static_cast<int>(std::lround(ratios.valid * n)));
  int n_test = std::max(1, static_cast<int>(std::lround(ratios.test * n)));
  while (n_valid + n_test > n - 1) {
    if (n_valid >= n_test && n_valid > 1) --n_valid;
    else if (n_test > 1) --n_test;
    else break;
  }

  std::map<std::string, Split> assignment;
  for (int i = 0; i < n; ++i) {
    Split s = i < n_valid ? Split::kValid
              : i < n_valid + n_test ? Split::kTest
                                     : Split::kTrain;
    assignment[speakers[i]] = s;
  }
  CorpusManifest out = manifest;
  for (auto &r : out.records) r.split = assignment.at(r.speaker_id);
  return out;
}

}  // namespace emoflow
