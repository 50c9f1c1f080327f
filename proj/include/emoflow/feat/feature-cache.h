// include/emoflow/feat/feature-cache.h

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

#ifndef EMOFLOW_FEAT_FEATURE_CACHE_H_
#define EMOFLOW_FEAT_FEATURE_CACHE_H_

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "emoflow/base/io.h"
#include "emoflow/feat/mel.h"
#include "emoflow/feat/pitch.h"
#include "emoflow/ingest/manifest.h"

namespace emoflow {

struct FeatureConfig {
  MelOptions mel;
  PitchOptions pitch;

  Json ToJson() const;
  /// Hash of ToJson(); stamped into every cache file and downstream model.
  std::string Hash() const;
  static FeatureConfig FromJson(const Json &j);
};

struct UtteranceFeatures {
  std::string id;
  std::string speaker_id;
  MelSpectrogram mel;
  PitchContour pitch;  // unnormalized, frame-aligned with mel
};

// Features for a corpus plus the per-speaker pitch statistics.  Statistics
// are pooled over every utterance in the set, i.e. over whatever data the
// featurize stage was given; the scope is recorded in the index.
struct FeatureSet {
  FeatureConfig config;
  std::map<std::string, UtteranceFeatures> utterances;
  std::map<std::string, SpeakerPitchStats> pitch_stats;
  std::string stats_scope = "all utterances of the featurized manifest";

  const UtteranceFeatures &Get(const std::string &id) const;
  bool Has(const std::string &id) const { return utterances.count(id) > 0; }
  /// Speaker-normalized pitch encoder input (T x 2).
  Matrix NormalizedPitch(const std::string &id) const;
  /// Recomputes pitch_stats from the stored contours.
  void ComputePitchStats();
  /// Throws, listing the ids, if any record is missing.
  void CheckCovers(const CorpusManifest &manifest) const;
};

UtteranceFeatures ComputeUtteranceFeatures(const Waveform &w, const std::string &id,
                                           const std::string &speaker_id,
                                           const MelComputer &mel_computer,
                                           const PitchOptions &pitch_opts);

/// Reads, standardizes and featurizes every record of the manifest.
FeatureSet Featurize(const CorpusManifest &manifest,
                     const std::filesystem::path &manifest_path,
                     const FeatureConfig &config);

// <dir>/index.json plus one binary <id>.feat per utterance holding the mel
// matrix, f0 contour, voiced mask and the feature-config hash.
void SaveFeatureSet(const FeatureSet &set, const std::filesystem::path &dir);
/// Refuses files whose config hash differs from the index (or from
/// expected_hash when given).
FeatureSet LoadFeatureSet(const std::filesystem::path &dir,
                          const std::optional<std::string> &expected_hash = std::nullopt);

}  // namespace emoflow

#endif  // EMOFLOW_FEAT_FEATURE_CACHE_H_
