// include/emoflow/ingest/split.h

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

#ifndef EMOFLOW_INGEST_SPLIT_H_
#define EMOFLOW_INGEST_SPLIT_H_

#include <cstdint>

#include "emoflow/ingest/manifest.h"

namespace emoflow {

struct SplitRatios {
  double train = 0.8, valid = 0.1, test = 0.1;
};

/// Parses "0.8,0.1,0.1".
SplitRatios ParseSplitRatios(const std::string &text);

// Speaker-level assignment.  Speakers are shuffled with the seed, then
// valid and test each take max(1, round(ratio * n)) speakers and train takes
// the rest.  Requires at least 3 speakers.
CorpusManifest SplitCorpus(const CorpusManifest &manifest, const SplitRatios &ratios,
                           uint64_t seed);

}  // namespace emoflow

#endif  // EMOFLOW_INGEST_SPLIT_H_
