// include/emoflow/ingest/manifest.h

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

#ifndef EMOFLOW_INGEST_MANIFEST_H_
#define EMOFLOW_INGEST_MANIFEST_H_

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace emoflow {

// The four overlapped emotion classes; the enum order (A < H < S < N) is
// also the tie-break order for predictions.
enum class Emotion { kAngry = 0, kHappy = 1, kSad = 2, kNeutral = 3 };
inline constexpr int kNumEmotions = 4;
inline constexpr std::array<Emotion, kNumEmotions> kAllEmotions = {
    Emotion::kAngry, Emotion::kHappy, Emotion::kSad, Emotion::kNeutral};

char EmotionCode(Emotion e);
/// Accepts exactly "A", "H", "S" or "N".
std::optional<Emotion> EmotionFromCode(const std::string &code);
inline int EmotionIndex(Emotion e) { return static_cast<int>(e); }
Emotion EmotionFromIndex(int index);

enum class Split { kTrain, kValid, kTest, kUnassigned };
const char *SplitName(Split s);
Split SplitFromName(const std::string &name);

struct UtteranceRecord {
  std::string id;
  std::string speaker_id;
  std::optional<Emotion> label;
  std::string audio_path;
  double duration = 0.0;  // seconds
  std::string corpus;
  Split split = Split::kUnassigned;
};

struct CorpusManifest {
  std::vector<UtteranceRecord> records;
  int sample_rate = 16000;
  int bit_depth = 16;

  /// Records of one split, in manifest order.
  CorpusManifest Subset(Split s) const;
  std::vector<std::string> Speakers() const;  // sorted, unique
};

// One JSON object per line with exactly the UtteranceRecord fields.  Blank
// lines are skipped.  A relative audio_path is kept as written; use
// ResolveAudioPath to locate the file.
CorpusManifest LoadManifest(const std::filesystem::path &path);
void WriteManifest(const CorpusManifest &manifest,
                   const std::filesystem::path &path);
std::string ManifestLine(const UtteranceRecord &rec);
UtteranceRecord ParseManifestLine(const std::string &line, size_t line_no);

std::filesystem::path ResolveAudioPath(const std::filesystem::path &manifest_path,
                                       const UtteranceRecord &rec);

/// Content hash of the serialized records; used as a corpus/manifest id.
std::string ManifestHash(const CorpusManifest &manifest);

}  // namespace emoflow

#endif  // EMOFLOW_INGEST_MANIFEST_H_
