// include/emoflow/ingest/labels.h

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

#ifndef EMOFLOW_INGEST_LABELS_H_
#define EMOFLOW_INGEST_LABELS_H_

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "emoflow/ingest/manifest.h"

namespace emoflow {

// Per-corpus lookup from raw emotion strings to the four-class scheme.
// Lookups are case-insensitive.  Anything without an entry is rejected
// (std::nullopt), which covers fear, disgust, surprise, frustration and,
// unless a merge is configured, IEMOCAP's "excited".
class LabelSchemeRegistry {
 public:
  /// Registry preloaded with: default, iemocap, savee, esdb, toy.
  LabelSchemeRegistry();

  void Register(const std::string &scheme,
                const std::map<std::string, Emotion> &table);
  /// Adds or overrides one entry, e.g. AddMerge("iemocap", "exc", kHappy).
  void AddMerge(const std::string &scheme, const std::string &raw, Emotion e);

  bool HasScheme(const std::string &scheme) const;
  std::vector<std::string> Schemes() const;

  /// Throws on an unregistered scheme.
  std::optional<Emotion> Map(const std::string &raw,
                             const std::string &scheme) const;

 private:
  std::map<std::string, std::map<std::string, Emotion>> schemes_;
};

/// Parses "name:raw=X,raw2=Y" merge specs (X in A/H/S/N) into the registry.
void ApplyMergeSpec(const std::string &spec, LabelSchemeRegistry *registry);

}  // namespace emoflow

#endif  // EMOFLOW_INGEST_LABELS_H_
