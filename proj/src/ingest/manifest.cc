// src/ingest/manifest.cc

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

#include "emoflow/ingest/manifest.h"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_set>

#include "emoflow/base/error.h"
#include "emoflow/base/io.h"

namespace emoflow {

char EmotionCode(Emotion e) {
  static const char kCodes[kNumEmotions] = {'A', 'H', 'S', 'N'};
  return kCodes[EmotionIndex(e)];
}

std::optional<Emotion> EmotionFromCode(const std::string &code) {
  if (code == "A") return Emotion::kAngry;
  if (code == "H") return Emotion::kHappy;
  if (code == "S") return Emotion::kSad;
  if (code == "N") return Emotion::kNeutral;
  return std::nullopt;
}

Emotion EmotionFromIndex(int index) {
  if (index < 0 || index >= kNumEmotions)
    EMO_ERR("emotion index out of range: " << index);
  return static_cast<Emotion>(index);
}

const char *SplitName(Split s) {
  switch (s) {
    case Split::kTrain: return "train";
    case Split::kValid: return "valid";
    case Split::kTest: return "test";
    case Split::kUnassigned: return "unassigned";
  }
  return "unassigned";
}

Split SplitFromName(const std::string &name) {
  if (name == "train") return Split::kTrain;
  if (name == "valid") return Split::kValid;
  if (name == "test") return Split::kTest;
  if (name == "unassigned") return Split::kUnassigned;
  EMO_ERR("unknown split name '" << name << "'");
}

CorpusManifest CorpusManifest::Subset(Split s) const {
  CorpusManifest out;
  out.sample_rate = sample_rate;
  out.bit_depth = bit_depth;
  for (const auto &r : records)
    if (r.split == s) out.records.push_back(r);
  return out;
}

std::vector<std::string> CorpusManifest::Speakers() const {
  std::set<std::string> s;
  for (const auto &r : records) s.insert(r.speaker_id);
  return {s.begin(), s.end()};
}

std::string ManifestLine(const UtteranceRecord &rec) {
  Json j;
  j["id"] = rec.id;
  j["speaker_id"] = rec.speaker_id;
  if (rec.label)
    j["label"] = std::string(1, EmotionCode(*rec.label));
  else
    j["label"] = nullptr;
  j["audio_path"] = rec.audio_path;
  j["duration"] = rec.duration;
  j["corpus"] = rec.corpus;
  j["split"] = SplitName(rec.split);
  return j.dump();
}

UtteranceRecord ParseManifestLine(const std::string &line, size_t line_no) {
  static const std::set<std::string> kFields = {
      "id", "speaker_id", "label", "audio_path", "duration", "corpus", "split"};
  Json j;
  try {
    j = Json::parse(line);
  } catch (const Json::parse_error &e) {
    EMO_ERR("manifest line " << line_no << ": malformed JSON (" << e.what() << ")");
  }
  if (!j.is_object())
    EMO_ERR("manifest line " << line_no << ": expected a JSON object");
  for (const auto &[key, value] : j.items()) {
    if (!kFields.count(key))
      EMO_ERR("manifest line " << line_no << ": unexpected field '" << key << "'");
  }
  for (const auto &f : kFields)
    if (!j.contains(f))
      EMO_ERR("manifest line " << line_no << ": missing field '" << f << "'");
  UtteranceRecord rec;
  try {
    rec.id = j.at("id").get<std::string>();
    rec.speaker_id = j.at("speaker_id").get<std::string>();
    const Json &label = j.at("label");
    if (!label.is_null()) {
      std::string code = label.get<std::string>();
      rec.label = EmotionFromCode(code);
      if (!rec.label)
        EMO_ERR("manifest line " << line_no << ": label '" << code
                << "' is not one of A, H, S, N");
    }
    rec.audio_path = j.at("audio_path").get<std::string>();
    rec.duration = j.at("duration").get<double>();
    rec.corpus = j.at("corpus").get<std::string>();
    rec.split = SplitFromName(j.at("split").get<std::string>());
  } catch (const Json::exception &e) {
    EMO_ERR("manifest line " << line_no << ": bad field type (" << e.what() << ")");
  } catch (const Error &e) {
    std::string msg = e.what();
    if (msg.rfind("manifest line", 0) == 0) throw;
    EMO_ERR("manifest line " << line_no << ": " << msg);
  }
  if (rec.id.empty()) EMO_ERR("manifest line " << line_no << ": empty id");
  if (!(rec.duration > 0.0))
    EMO_ERR("manifest line " << line_no << ": duration must be positive");
  return rec;
}

CorpusManifest LoadManifest(const std::filesystem::path &path) {
  std::ifstream is(path);
  if (!is) EMO_ERR("cannot open manifest " << path.string());
  CorpusManifest manifest;
  std::unordered_set<std::string> seen;
  std::string line;
  size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    UtteranceRecord rec = ParseManifestLine(line, line_no);
    if (!seen.insert(rec.id).second)
      EMO_ERR("duplicate utterance id '" << rec.id << "' at manifest line "
              << line_no);
    manifest.records.push_back(std::move(rec));
  }
  return manifest;
}

void WriteManifest(const CorpusManifest &manifest,
                   const std::filesystem::path &path) {
  std::string text;
  for (const auto &r : manifest.records) text += ManifestLine(r) + "\n";
  WriteTextFile(path, text);
}

std::filesystem::path ResolveAudioPath(const std::filesystem::path &manifest_path,
                                       const UtteranceRecord &rec) {
  std::filesystem::path p(rec.audio_path);
  if (p.is_absolute()) return p;
  return manifest_path.parent_path() / p;
}

std::string ManifestHash(const CorpusManifest &manifest) {
  std::string text;
  for (const auto &r : manifest.records) text += ManifestLine(r) + "\n";
  return HashHex(text);
}

}  // namespace emoflow
