// tests/unit/ingest-test.cc

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

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>

#include <gtest/gtest.h>

#include "emoflow/base/error.h"
#include "emoflow/base/random.h"
#include "emoflow/ingest/labels.h"
#include "emoflow/ingest/manifest.h"
#include "emoflow/ingest/split.h"
#include "emoflow/ingest/toy-corpus.h"
#include "emoflow/ingest/wave.h"

namespace emoflow {
namespace {

namespace fs = std::filesystem;

fs::path TempDir(const std::string &name) {
  fs::path p = fs::temp_directory_path() / ("emoflow-ingest-" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string Line(const std::string &id, const std::string &spk, const std::string &label) {
  UtteranceRecord r;
  r.id = id;
  r.speaker_id = spk;
  if (!label.empty()) r.label = EmotionFromCode(label);
  r.audio_path = id + ".wav";
  r.duration = 1.5;
  r.corpus = "c";
  return ManifestLine(r);
}

TEST(ManifestTest, EmptyFileGivesEmptyManifest) {
  fs::path dir = TempDir("empty");
  WriteTextFile(dir / "m.jsonl", "");
  EXPECT_TRUE(LoadManifest(dir / "m.jsonl").records.empty());
}

TEST(ManifestTest, PreservesOrder) {
  fs::path dir = TempDir("order");
  WriteTextFile(dir / "m.jsonl",
                Line("c1", "s1", "A") + "\n" + Line("a2", "s2", "") + "\n" +
                    Line("b3", "s1", "N") + "\n");
  CorpusManifest m = LoadManifest(dir / "m.jsonl");
  ASSERT_EQ(m.records.size(), 3u);
  EXPECT_EQ(m.records[0].id, "c1");
  EXPECT_EQ(m.records[1].id, "a2");
  EXPECT_EQ(m.records[2].id, "b3");
  EXPECT_FALSE(m.records[1].label.has_value());
  EXPECT_EQ(*m.records[2].label, Emotion::kNeutral);
}

TEST(ManifestTest, DuplicateIdIsNamed) {
  fs::path dir = TempDir("dup");
  WriteTextFile(dir / "m.jsonl", Line("u0", "s", "A") + "\n" + Line("u1", "s", "H") + "\n" +
                                     Line("u2", "s", "S") + "\n" + Line("u3", "s", "N") +
                                     "\n" + Line("u1", "s", "A") + "\n");
  try {
    LoadManifest(dir / "m.jsonl");
    FAIL() << "expected an error";
  } catch (const Error &e) {
    EXPECT_NE(std::string(e.what()).find("'u1'"), std::string::npos) << e.what();
    EXPECT_NE(std::string(e.what()).find("line 5"), std::string::npos) << e.what();
  }
}

TEST(ManifestTest, ParseErrorNamesLine) {
  fs::path dir = TempDir("bad");
  WriteTextFile(dir / "m.jsonl", Line("u0", "s", "A") + "\n{not json}\n");
  try {
    LoadManifest(dir / "m.jsonl");
    FAIL() << "expected an error";
  } catch (const Error &e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos) << e.what();
  }
}

TEST(ManifestTest, RejectsNonPositiveDuration) {
  std::string line = Line("u0", "s", "A");
  line.replace(line.find("1.5"), 3, "0.0");
  EXPECT_THROW(ParseManifestLine(line, 1), Error);
}

TEST(ManifestTest, RoundTrip) {
  fs::path dir = TempDir("roundtrip");
  CorpusManifest m;
  for (int i = 0; i < 4; ++i) m.records.push_back(ParseManifestLine(Line("u" + std::to_string(i), "s", "H"), 1));
  m.records[2].split = Split::kTest;
  WriteManifest(m, dir / "m.jsonl");
  CorpusManifest back = LoadManifest(dir / "m.jsonl");
  EXPECT_EQ(ManifestHash(m), ManifestHash(back));
  EXPECT_EQ(back.records[2].split, Split::kTest);
}

TEST(StandardizeTest, SixteenKhzIsIdentityOnGrid) {
  MultiChannelAudio a;
  a.sample_rate = 16000;
  Rng rng(3);
  std::vector<double> x(4000);
  for (double &v : x) v = QuantizeTo16Bit(rng.Uniform(-0.9, 0.9));
  a.channels = {x};
  Waveform w = StandardizeAudio(a);
  ASSERT_EQ(w.samples.size(), x.size());
  for (size_t i = 0; i < x.size(); ++i) ASSERT_EQ(w.samples[i], x[i]);
}

TEST(StandardizeTest, DownsampleLength) {
  MultiChannelAudio a;
  a.sample_rate = 32000;
  std::vector<double> x(64000);
  for (size_t i = 0; i < x.size(); ++i) x[i] = 0.5 * std::sin(2 * M_PI * 300.0 * i / 32000.0);
  a.channels = {x};
  Waveform w = StandardizeAudio(a);
  EXPECT_EQ(w.sample_rate, 16000);
  EXPECT_NEAR(static_cast<double>(w.samples.size()), 2.0 * 16000, 1.0);
  // A 300 Hz tone survives; compare against the analytic signal mid-file.
  double max_err = 0.0;
  for (size_t i = 1000; i < 31000; ++i)
    max_err = std::max(max_err, std::abs(w.samples[i] - 0.5 * std::sin(2 * M_PI * 300.0 * i / 16000.0)));
  EXPECT_LT(max_err, 2e-3);
}

TEST(StandardizeTest, StereoBecomesChannelMean) {
  MultiChannelAudio a;
  a.sample_rate = 16000;
  std::vector<double> l(1000), r(1000);
  Rng rng(5);
  for (size_t i = 0; i < l.size(); ++i) {
    l[i] = QuantizeTo16Bit(rng.Uniform(-0.5, 0.5));
    r[i] = l[i];
  }
  a.channels = {l, r};
  Waveform w = StandardizeAudio(a);
  for (size_t i = 0; i < l.size(); ++i) ASSERT_EQ(w.samples[i], l[i]);

  a.channels = {std::vector<double>(10, 0.5), std::vector<double>(10, -0.1)};
  w = StandardizeAudio(a);
  for (double v : w.samples) EXPECT_NEAR(v, 0.2, 1.0 / 32767);
}

TEST(StandardizeTest, UnsupportedRateThrows) {
  MultiChannelAudio a;
  a.sample_rate = 4000;
  a.channels = {std::vector<double>(100, 0.0)};
  EXPECT_THROW(StandardizeAudio(a), Error);
  a.sample_rate = 96000;
  EXPECT_THROW(StandardizeAudio(a), Error);
}

TEST(WaveTest, WriteReadRoundTrip) {
  fs::path dir = TempDir("wave");
  Waveform w;
  for (int i = 0; i < 500; ++i) w.samples.push_back(QuantizeTo16Bit(std::sin(i * 0.1) * 0.7));
  WriteWave16(dir / "x.wav", w);
  MultiChannelAudio a = ReadWave(dir / "x.wav");
  ASSERT_EQ(a.channels.size(), 1u);
  EXPECT_EQ(a.sample_rate, 16000);
  EXPECT_EQ(a.bit_depth, 16);
  ASSERT_EQ(a.channels[0].size(), w.samples.size());
  for (size_t i = 0; i < w.samples.size(); ++i) ASSERT_EQ(a.channels[0][i], w.samples[i]);
}

TEST(LabelTest, FourClassMapping) {
  LabelSchemeRegistry reg;
  for (const std::string &scheme : reg.Schemes()) {
    EXPECT_EQ(reg.Map("angry", scheme), Emotion::kAngry) << scheme;
    EXPECT_EQ(reg.Map("Neutral", scheme), Emotion::kNeutral) << scheme;
  }
  EXPECT_FALSE(reg.Map("fear", "default").has_value());
  EXPECT_EQ(reg.Map("neutral", "default"), Emotion::kNeutral);
  EXPECT_EQ(reg.Map("ang", "iemocap"), Emotion::kAngry);
  EXPECT_EQ(reg.Map("sa", "savee"), Emotion::kSad);
  EXPECT_FALSE(reg.Map("exc", "iemocap").has_value());
  EXPECT_FALSE(reg.Map("fru", "iemocap").has_value());
  EXPECT_THROW(reg.Map("angry", "nosuchcorpus"), Error);
}

TEST(LabelTest, MergeSpec) {
  LabelSchemeRegistry reg;
  ApplyMergeSpec("iemocap:exc=H", &reg);
  EXPECT_EQ(reg.Map("exc", "iemocap"), Emotion::kHappy);
  EXPECT_FALSE(reg.Map("exc", "savee").has_value());
  EXPECT_THROW(ApplyMergeSpec("iemocap:exc=Q", &reg), Error);
}

CorpusManifest SpeakerManifest(int n_speakers) {
  CorpusManifest m;
  for (int s = 0; s < n_speakers; ++s)
    for (int u = 0; u < 3; ++u) {
      UtteranceRecord r;
      r.id = "s" + std::to_string(s) + "_" + std::to_string(u);
      r.speaker_id = "spk" + std::to_string(s);
      r.duration = 1.0;
      m.records.push_back(r);
    }
  return m;
}

std::map<Split, std::set<std::string>> SpeakersBySplit(const CorpusManifest &m) {
  std::map<Split, std::set<std::string>> out;
  for (const auto &r : m.records) out[r.split].insert(r.speaker_id);
  return out;
}

TEST(SplitTest, TenSpeakers) {
  auto by = SpeakersBySplit(SplitCorpus(SpeakerManifest(10), {}, 11));
  EXPECT_EQ(by[Split::kTrain].size(), 8u);
  EXPECT_EQ(by[Split::kValid].size(), 1u);
  EXPECT_EQ(by[Split::kTest].size(), 1u);
  EXPECT_EQ(by.count(Split::kUnassigned), 0u);
}

TEST(SplitTest, ThreeSpeakersFloor) {
  auto by = SpeakersBySplit(SplitCorpus(SpeakerManifest(3), {}, 11));
  EXPECT_EQ(by[Split::kTrain].size(), 1u);
  EXPECT_EQ(by[Split::kValid].size(), 1u);
  EXPECT_EQ(by[Split::kTest].size(), 1u);
}

TEST(SplitTest, SpeakerDisjointAndDeterministic) {
  CorpusManifest a = SplitCorpus(SpeakerManifest(12), {}, 99);
  CorpusManifest b = SplitCorpus(SpeakerManifest(12), {}, 99);
  EXPECT_EQ(ManifestHash(a), ManifestHash(b));
  std::map<std::string, Split> spk_split;
  for (const auto &r : a.records) {
    auto [it, inserted] = spk_split.emplace(r.speaker_id, r.split);
    if (!inserted) {
      EXPECT_EQ(it->second, r.split);
    }
  }
}

TEST(SplitTest, Errors) {
  EXPECT_THROW(SplitCorpus(SpeakerManifest(2), {}, 1), Error);
  EXPECT_THROW(SplitCorpus(SpeakerManifest(5), {0.5, 0.1, 0.1}, 1), Error);
  EXPECT_THROW(ParseSplitRatios("0.8,0.1"), UsageError);
  SplitRatios r = ParseSplitRatios("0.7,0.2,0.1");
  EXPECT_DOUBLE_EQ(r.valid, 0.2);
}

ToyCorpusSpec SmallSpec(CodingFactor f) {
  ToyCorpusSpec s;
  s.coding_factor = f;
  s.n_speakers = 4;
  s.n_utterances_per_class = 8;
  s.utterance_duration = 2.0;
  s.seed = 17;
  return s;
}

// Oracle: count zero crossings of the mean-removed envelope, then place the
// rate between the class rates with midpoint thresholds.
int ClassifyEnvelopeRate(const ToyGeneratorParams &p, double rate, double phase, double duration) {
  const int n = 4000;
  std::vector<double> e(n);
  double mean = 0.0;
  for (int i = 0; i < n; ++i) {
    e[i] = ToyEnvelope(p, rate, phase, duration * i / n);
    mean += e[i] / n;
  }
  int crossings = 0;
  for (int i = 1; i < n; ++i)
    if ((e[i - 1] - mean) * (e[i] - mean) < 0) ++crossings;
  double est = crossings / (2.0 * duration);
  int best = 0;
  for (int k = 0; k < 4; ++k)
    if (std::abs(est - p.syllable_rates[k]) < std::abs(est - p.syllable_rates[best])) best = k;
  return best;
}

TEST(ToyCorpusTest, RhythmCodedRecoverable) {
  ToyCorpusSpec spec = SmallSpec(CodingFactor::kRhythm);
  auto corpus = GenerateToyCorpus(spec);
  ASSERT_EQ(corpus.size(), 4u * 4 * 8);
  int correct = 0;
  for (const auto &u : corpus)
    correct += ClassifyEnvelopeRate(spec.params, u.syllable_rate, u.envelope_phase,
                                    spec.utterance_duration) == u.class_index;
  EXPECT_GE(static_cast<double>(correct) / corpus.size(), 0.95);
}

TEST(ToyCorpusTest, PitchCodedContoursFollowClass) {
  ToyCorpusSpec spec = SmallSpec(CodingFactor::kPitch);
  auto corpus = GenerateToyCorpus(spec);
  for (const auto &u : corpus) {
    EXPECT_EQ(u.contour, u.class_index);
    EXPECT_LE(std::abs(u.excursion - spec.params.excursion), spec.params.excursion_jitter);
  }
}

TEST(ToyCorpusTest, ContourShapesShareTheirValueDistribution) {
  // Sorted samples of each shape must coincide up to one sampling step
  // of the steepest shape; the shapes themselves must differ.
  const int n = 400;
  std::vector<std::vector<double>> sorted(4);
  for (int c = 0; c < 4; ++c) {
    for (int i = 0; i < n; ++i) sorted[c].push_back(ToyContour(c, 6.0, (i + 0.5) / n));
    std::sort(sorted[c].begin(), sorted[c].end());
    EXPECT_NEAR(sorted[c].front(), -3.0, 0.05);
    EXPECT_NEAR(sorted[c].back(), 3.0, 0.05);
  }
  for (int c = 1; c < 4; ++c)
    for (int i = 0; i < n; ++i) EXPECT_NEAR(sorted[c][i], sorted[0][i], 2.0 * 6.0 / n + 1e-9);
  std::set<std::pair<int, int>> signs;
  for (int c = 0; c < 4; ++c)
    signs.insert({ToyContour(c, 6.0, 0.2) > 0.0 ? 1 : -1, ToyContour(c, 6.0, 0.8) > 0.0 ? 1 : -1});
  EXPECT_EQ(signs.size(), 4u);
  EXPECT_DOUBLE_EQ(ToyContour(2, 6.0, 0.5), 3.0);
  EXPECT_DOUBLE_EQ(ToyContour(3, 6.0, 0.0), 3.0);
  EXPECT_THROW(ToyContour(4, 6.0, 0.5), Error);
}

TEST(ToyCorpusTest, NonCodingFactorsIndependentOfClass) {
  ToyCorpusSpec spec = SmallSpec(CodingFactor::kRhythm);
  spec.n_utterances_per_class = 40;
  auto corpus = GenerateToyCorpus(spec);
  // Every class should see every contour shape; a class-linked draw
  // would leave gaps.
  std::map<int, std::set<int>> seen;
  for (const auto &u : corpus) seen[u.class_index].insert(u.contour);
  for (int k = 0; k < 4; ++k) EXPECT_EQ(seen[k].size(), 4u) << k;
}

TEST(ToyCorpusTest, DeterministicBytes) {
  ToyCorpusSpec spec = SmallSpec(CodingFactor::kPitch);
  spec.n_speakers = 4;
  fs::path a = TempDir("toy-a"), b = TempDir("toy-b");
  CorpusManifest ma = SynthToyCorpus(spec, a);
  SynthToyCorpus(spec, b);
  for (const auto &r : ma.records)
    ASSERT_EQ(ReadTextFile(a / r.audio_path), ReadTextFile(b / r.audio_path)) << r.id;
  EXPECT_EQ(ReadTextFile(a / "manifest.jsonl"), ReadTextFile(b / "manifest.jsonl"));
  CorpusManifest reread = LoadManifest(a / "manifest.jsonl");
  EXPECT_EQ(reread.records.size(), 4u * 4 * 8);
  EXPECT_EQ(reread.Speakers().size(), 4u);
}

TEST(ToyCorpusTest, SpecErrors) {
  ToyCorpusSpec spec = SmallSpec(CodingFactor::kContent);
  spec.n_speakers = 2;
  EXPECT_THROW(GenerateToyCorpus(spec), Error);
}

}  // namespace
}  // namespace emoflow
