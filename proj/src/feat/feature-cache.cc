// src/feat/feature-cache.cc

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

#include "emoflow/feat/feature-cache.h"

#include <fstream>

#include "emoflow/base/error.h"
#include "emoflow/ingest/wave.h"

namespace emoflow {

namespace {
const char kFeatMagic[] = "EMOFEAT1";
}

Json FeatureConfig::ToJson() const {
  return {{"mel", mel.ToJson()}, {"pitch", pitch.ToJson()}};
}

std::string FeatureConfig::Hash() const { return HashJson(ToJson()); }

FeatureConfig FeatureConfig::FromJson(const Json &j) {
  FeatureConfig c;
  const Json &m = j.at("mel");
  c.mel.frame.sample_rate = m.at("sample_rate");
  c.mel.frame.window_size = m.at("window_size");
  c.mel.frame.hop_size = m.at("hop_size");
  c.mel.num_bins = m.at("num_bins");
  c.mel.low_freq = m.at("low_freq");
  c.mel.high_freq = m.at("high_freq");
  c.mel.floor = m.at("floor");
  const Json &p = j.at("pitch");
  c.pitch.frame.sample_rate = p.at("sample_rate");
  c.pitch.frame.window_size = p.at("window_size");
  c.pitch.frame.hop_size = p.at("hop_size");
  c.pitch.min_f0 = p.at("min_f0");
  c.pitch.max_f0 = p.at("max_f0");
  c.pitch.threshold = p.at("threshold");
  c.pitch.silence_rms = p.at("silence_rms");
  return c;
}

const UtteranceFeatures &FeatureSet::Get(const std::string &id) const {
  auto it = utterances.find(id);
  if (it == utterances.end()) EMO_ERR("no features for utterance '" << id << "'");
  return it->second;
}

Matrix FeatureSet::NormalizedPitch(const std::string &id) const {
  const UtteranceFeatures &f = Get(id);
  auto it = pitch_stats.find(f.speaker_id);
  if (it == pitch_stats.end())
    EMO_ERR("no pitch statistics for speaker '" << f.speaker_id << "'");
  return PitchFeatureMatrix(NormalizePitch(f.pitch, it->second));
}

void FeatureSet::ComputePitchStats() {
  std::map<std::string, std::vector<PitchContour>> by_speaker;
  for (const auto &[id, f] : utterances) by_speaker[f.speaker_id].push_back(f.pitch);
  pitch_stats.clear();
  for (const auto &[spk, contours] : by_speaker)
    pitch_stats[spk] = ComputeSpeakerPitchStats(contours, spk);
}

void FeatureSet::CheckCovers(const CorpusManifest &manifest) const {
  std::string missing;
  int n = 0;
  for (const auto &r : manifest.records) {
    if (!Has(r.id)) {
      if (n < 20) missing += (n ? ", " : "") + r.id;
      ++n;
    }
  }
  if (n > 0)
    EMO_ERR("missing features for " << n << " utterance(s): " << missing
            << (n > 20 ? ", ..." : ""));
}

UtteranceFeatures ComputeUtteranceFeatures(const Waveform &w, const std::string &id,
                                           const std::string &speaker_id,
                                           const MelComputer &mel_computer,
                                           const PitchOptions &pitch_opts) {
  UtteranceFeatures f;
  f.id = id;
  f.speaker_id = speaker_id;
  f.mel = mel_computer.Compute(w);
  f.pitch = ExtractPitch(w, pitch_opts);
  if (f.pitch.NumFrames() != f.mel.NumFrames())
    EMO_ERR("pitch/mel frame mismatch for " << id << ": " << f.pitch.NumFrames()
            << " vs " << f.mel.NumFrames());
  return f;
}

FeatureSet Featurize(const CorpusManifest &manifest,
                     const std::filesystem::path &manifest_path,
                     const FeatureConfig &config) {
  if (config.mel.frame.window_size != config.pitch.frame.window_size ||
      config.mel.frame.hop_size != config.pitch.frame.hop_size)
    EMO_ERR("mel and pitch frame options must match");
  FeatureSet set;
  set.config = config;
  MelComputer mel(config.mel);
  for (const auto &r : manifest.records) {
    Waveform w = StandardizeAudio(ReadWave(ResolveAudioPath(manifest_path, r)));
    set.utterances[r.id] = ComputeUtteranceFeatures(w, r.id, r.speaker_id, mel, config.pitch);
  }
  set.ComputePitchStats();
  return set;
}

void SaveFeatureSet(const FeatureSet &set, const std::filesystem::path &dir) {
  EnsureDirectory(dir);
  const std::string hash = set.config.Hash();
  Json index;
  index["schema"] = 1;
  index["config"] = set.config.ToJson();
  index["config_hash"] = hash;
  index["stats_scope"] = set.stats_scope;
  Json stats = Json::object();
  for (const auto &[spk, s] : set.pitch_stats)
    stats[spk] = {{"mean", s.mean}, {"std", s.std}, {"n_voiced", s.n_voiced}};
  index["pitch_stats"] = stats;
  Json ids = Json::array();
  for (const auto &[id, f] : set.utterances) {
    ids.push_back({{"id", id}, {"speaker_id", f.speaker_id}});
    std::ofstream os(dir / (id + ".feat"), std::ios::binary | std::ios::trunc);
    if (!os) EMO_ERR("cannot write feature file for " << id);
    os.write(kFeatMagic, 8);
    WriteString(os, hash);
    WriteString(os, id);
    WriteString(os, f.speaker_id);
    WriteMatrix(os, f.mel.frames);
    WriteDoubles(os, f.pitch.f0);
    std::string voiced(f.pitch.voiced.begin(), f.pitch.voiced.end());
    WriteString(os, voiced);
    if (!os) EMO_ERR("write failed for feature file of " << id);
  }
  index["utterances"] = ids;
  WriteJsonFile(dir / "index.json", index);
}

FeatureSet LoadFeatureSet(const std::filesystem::path &dir,
                          const std::optional<std::string> &expected_hash) {
  Json index = ReadJsonFile(dir / "index.json");
  FeatureSet set;
  set.config = FeatureConfig::FromJson(index.at("config"));
  const std::string hash = index.at("config_hash");
  if (hash != set.config.Hash())
    EMO_ERR("feature index " << dir.string() << " is inconsistent with its config");
  if (expected_hash && *expected_hash != hash)
    EMO_ERR("feature cache " << dir.string() << " was built with config " << hash
            << ", expected " << *expected_hash << "; refusing to mix caches");
  set.stats_scope = index.value("stats_scope", set.stats_scope);
  for (const auto &[spk, s] : index.at("pitch_stats").items()) {
    SpeakerPitchStats st;
    st.speaker_id = spk;
    st.mean = s.at("mean");
    st.std = s.at("std");
    st.n_voiced = s.at("n_voiced");
    set.pitch_stats[spk] = st;
  }
  for (const auto &u : index.at("utterances")) {
    const std::string id = u.at("id");
    std::ifstream is(dir / (id + ".feat"), std::ios::binary);
    if (!is) EMO_ERR("missing feature file for " << id << " in " << dir.string());
    char magic[8];
    is.read(magic, 8);
    if (!is || std::string(magic, 8) != kFeatMagic)
      EMO_ERR("bad feature file for " << id);
    std::string file_hash = ReadString(is);
    if (file_hash != hash)
      EMO_ERR("feature file for " << id << " has config hash " << file_hash
              << " but the cache index says " << hash << "; refusing to mix caches");
    UtteranceFeatures f;
    f.id = ReadString(is);
    f.speaker_id = ReadString(is);
    f.mel.frames = ReadMatrix(is);
    f.mel.hop_seconds = set.config.mel.frame.HopSeconds();
    f.mel.sample_rate = set.config.mel.frame.sample_rate;
    f.pitch.f0 = ReadDoubles(is);
    std::string voiced = ReadString(is);
    f.pitch.voiced.assign(voiced.begin(), voiced.end());
    if (f.pitch.f0.size() != static_cast<size_t>(f.mel.frames.rows()) ||
        f.pitch.voiced.size() != f.pitch.f0.size())
      EMO_ERR("feature file for " << id << " has misaligned pitch and mel");
    set.utterances[id] = std::move(f);
  }
  return set;
}

}  // namespace emoflow
