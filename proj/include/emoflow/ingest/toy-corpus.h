// include/emoflow/ingest/toy-corpus.h

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

#ifndef EMOFLOW_INGEST_TOY_CORPUS_H_
#define EMOFLOW_INGEST_TOY_CORPUS_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "emoflow/base/io.h"
#include "emoflow/ingest/manifest.h"
#include "emoflow/ingest/wave.h"

namespace emoflow {

// Synthetic source-filter "speech" whose class lives in exactly one factor.
//
// Each utterance is an impulse train (f0 contour) shaped by a one-pole
// spectral tilt and three cascaded resonators (vowel formants scaled by the
// speaker's vocal-tract factor), multiplied by a syllabic amplitude envelope.
// The three factors are drawn independently:
//   rhythm  - syllable rate (fixed duty cycle) and envelope phase;
//   pitch   - f0 contour shape around the speaker's base f0: rise, fall,
//             rise-fall or fall-rise, all spanning the same semitone range
//             so every shape visits each f0 value for the same time;
//   content - rotation of a fixed four-vowel sequence.
// The coding factor takes the class's value; the other two draw uniformly
// from the same value sets independently of the class.  Pauses dip to
// pause_level instead of silence, so the source stays periodic and the
// voicing pattern carries no rhythm.

enum class CodingFactor { kRhythm, kPitch, kContent };
const char *CodingFactorName(CodingFactor f);
CodingFactor CodingFactorFromName(const std::string &name);

struct VowelTemplate {
  char symbol;
  double f1, f2, f3;
};

struct ToyGeneratorParams {
  int sample_rate = kStandardSampleRate;
  double speaker_f0_min = 100.0, speaker_f0_max = 220.0;  // log-uniform
  double formant_scale_min = 0.88, formant_scale_max = 1.12;
  double tilt_min = 0.65, tilt_max = 0.9;
  std::array<double, 3> formant_bandwidths = {80.0, 100.0, 140.0};

  std::array<double, 4> syllable_rates = {1.0, 1.6, 2.4, 3.4};  // Hz, per class
  double rate_jitter = 0.04;    // relative, uniform +-
  double duty_cycle = 0.5;
  double ramp_seconds = 0.02;
  double pause_level = 0.05;

  double excursion = 12.0;  // semitones, lowest to highest point of the contour
  double excursion_jitter = 0.6;

  std::array<VowelTemplate, 4> vowels = {{{'a', 730, 1090, 2440},
                                          {'i', 270, 2290, 3010},
                                          {'u', 300, 870, 2240},
                                          {'e', 530, 1840, 2480}}};
  double vowel_boundary_jitter = 0.06;  // seconds
  double vowel_transition = 0.04;       // seconds

  double noise_level = 0.001;
  double target_rms = 0.1;

  Json ToJson() const;
};

struct ToyCorpusSpec {
  CodingFactor coding_factor = CodingFactor::kRhythm;
  int n_speakers = 8;
  int n_utterances_per_class = 16;  // per speaker and class
  double utterance_duration = 2.0;  // seconds
  uint64_t seed = 0;
  std::string corpus = "toy";
  ToyGeneratorParams params;

  Json ToJson() const;
};

struct ToySpeaker {
  std::string id;
  double base_f0 = 0.0;
  double formant_scale = 1.0;
  double tilt = 0.8;
};

// Generator parameters of one utterance, kept so oracles can read them.
struct ToyUtterance {
  UtteranceRecord record;
  int class_index = 0;
  double syllable_rate = 0.0;
  double envelope_phase = 0.0;  // seconds
  int contour = 0;              // 0 rise, 1 fall, 2 rise-fall, 3 fall-rise
  double excursion = 0.0;       // semitones
  int vowel_rotation = 0;
  std::vector<double> vowel_boundaries;  // seconds, interior boundaries
  ToySpeaker speaker;
  Waveform audio;

  Json ParamsJson() const;
};

std::vector<ToySpeaker> DrawToySpeakers(const ToyCorpusSpec &spec);

ToyUtterance GenerateToyUtterance(const ToyCorpusSpec &spec, const ToySpeaker &speaker,
                                  int class_index, int index);

/// All utterances in memory, ordered speaker-major, then class, then index.
std::vector<ToyUtterance> GenerateToyCorpus(const ToyCorpusSpec &spec);

// Writes <out>/wav/<id>.wav, <out>/manifest.jsonl (audio paths relative to
// out), <out>/toy_params.jsonl and <out>/toy_spec.json.  Labels are A/H/S/N
// for class indices 0..3; splits are left unassigned.
CorpusManifest SynthToyCorpus(const ToyCorpusSpec &spec,
                              const std::filesystem::path &out_dir);

/// Semitone offset from the base f0 of a contour shape at relative time
/// s in [0, 1]; exposed for oracle tests.
double ToyContour(int contour, double excursion, double s);

/// Amplitude envelope value at time t; exposed for oracle tests.
double ToyEnvelope(const ToyGeneratorParams &p, double rate, double phase, double t);

}  // namespace emoflow

#endif  // EMOFLOW_INGEST_TOY_CORPUS_H_
