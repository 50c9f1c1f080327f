// include/emoflow/cli/run-config.h

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

#ifndef EMOFLOW_CLI_RUN_CONFIG_H_
#define EMOFLOW_CLI_RUN_CONFIG_H_

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "emoflow/base/io.h"
#include "emoflow/feat/feature-cache.h"
#include "emoflow/flow/speechflow.h"
#include "emoflow/ingest/split.h"
#include "emoflow/ser/acrnn.h"
#include "emoflow/timbre/timbre-encoder.h"

namespace emoflow {

// Everything a pipeline run depends on.  The INI file has one section per
// module ([feat], [timbre], [flow], [acrnn], [run]); nested fields use
// dotted keys such as "adam.learning_rate" or "mel.num_bins".
struct RunConfig {
  FeatureConfig feat;
  TimbreConfig timbre;
  SpeechFlowConfig flow;
  AcrnnConfig acrnn;
  SplitRatios split;
  uint64_t seed = 0;

  /// Section contents without the per-stage seeds.
  Json SectionJson(const std::string &section) const;
  /// Hash recorded in every artifact the section produces.
  std::string SectionHash(const std::string &section) const;
  Json ToJson() const;
};

/// Known section names.
const std::vector<std::string> &ConfigSections();

/// Defaults, then the file (if given), then "section.key=value" overrides.
/// Unknown sections or keys and ill-typed values are usage errors.  The
/// per-stage seeds are derived from the global seed afterwards.
RunConfig LoadRunConfig(const std::optional<std::filesystem::path> &path,
                        const std::vector<std::string> &overrides,
                        std::optional<uint64_t> seed = std::nullopt);

/// Stage seeds as a function of the global seed.
uint64_t StageSeed(uint64_t global_seed, const std::string &stage);

}  // namespace emoflow

#endif  // EMOFLOW_CLI_RUN_CONFIG_H_
