// src/ingest/toy-corpus.cc

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

#include "emoflow/ingest/toy-corpus.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "emoflow/base/error.h"
#include "emoflow/base/random.h"

namespace emoflow {

const char *CodingFactorName(CodingFactor f) {
  switch (f) {
    case CodingFactor::kRhythm: return "rhythm";
    case CodingFactor::kPitch: return "pitch";
    case CodingFactor::kContent: return "content";
  }
  return "rhythm";
}

CodingFactor CodingFactorFromName(const std::string &name) {
  if (name == "rhythm") return CodingFactor::kRhythm;
  if (name == "pitch") return CodingFactor::kPitch;
  if (name == "content") return CodingFactor::kContent;
  EMO_USAGE_ERR("unknown coding factor '" << name << "' (rhythm, pitch, content)");
}

Json ToyGeneratorParams::ToJson() const {
  Json j;
  j["sample_rate"] = sample_rate;
  j["speaker_f0_range"] = {speaker_f0_min, speaker_f0_max};
  j["formant_scale_range"] = {formant_scale_min, formant_scale_max};
  j["tilt_range"] = {tilt_min, tilt_max};
  j["formant_bandwidths"] = formant_bandwidths;
  j["syllable_rates"] = syllable_rates;
  j["rate_jitter"] = rate_jitter;
  j["duty_cycle"] = duty_cycle;
  j["ramp_seconds"] = ramp_seconds;
  j["pause_level"] = pause_level;
  j["excursion"] = excursion;
  j["excursion_jitter"] = excursion_jitter;
  Json vowels = Json::array();
  for (const auto &v : this->vowels)
    vowels.push_back({{"symbol", std::string(1, v.symbol)}, {"formants", {v.f1, v.f2, v.f3}}});
  j["vowels"] = vowels;
  j["vowel_boundary_jitter"] = vowel_boundary_jitter;
  j["vowel_transition"] = vowel_transition;
  j["noise_level"] = noise_level;
  j["target_rms"] = target_rms;
  return j;
}

Json ToyCorpusSpec::ToJson() const {
  Json j;
  j["coding_factor"] = CodingFactorName(coding_factor);
  j["n_speakers"] = n_speakers;
  j["n_utterances_per_class"] = n_utterances_per_class;
  j["utterance_duration"] = utterance_duration;
  j["seed"] = seed;
  j["corpus"] = corpus;
  j["params"] = params.ToJson();
  return j;
}

Json ToyUtterance::ParamsJson() const {
  Json j;
  j["id"] = record.id;
  j["speaker_id"] = speaker.id;
  j["class_index"] = class_index;
  j["syllable_rate"] = syllable_rate;
  j["envelope_phase"] = envelope_phase;
  j["contour"] = contour;
  j["excursion"] = excursion;
  j["vowel_rotation"] = vowel_rotation;
  j["vowel_boundaries"] = vowel_boundaries;
  j["base_f0"] = speaker.base_f0;
  j["formant_scale"] = speaker.formant_scale;
  j["tilt"] = speaker.tilt;
  return j;
}

namespace {

void CheckSpec(const ToyCorpusSpec &spec) {
  if (spec.n_speakers < 4)
    EMO_ERR("toy corpus needs at least 4 speakers, got " << spec.n_speakers);
  if (spec.n_utterances_per_class < 8)
    EMO_ERR("toy corpus needs at least 8 utterances per class, got "
            << spec.n_utterances_per_class);
  if (!(spec.utterance_duration >= 0.5))
    EMO_ERR("toy utterance duration must be at least 0.5 s");
}

std::string SpeakerId(const ToyCorpusSpec &spec, int s) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "_spk%02d", s);
  return spec.corpus + buf;
}

// Two-pole resonator with unit gain at DC.
struct Resonator {
  double y1 = 0.0, y2 = 0.0;
  double Step(double x, double freq, double bw, double fs) {
    double r = std::exp(-std::numbers::pi * bw / fs);
    double c = 2.0 * r * std::cos(2.0 * std::numbers::pi * freq / fs);
    double gain = 1.0 - c + r * r;
    double y = gain * x + c * y1 - r * r * y2;
    y2 = y1;
    y1 = y;
    return y;
  }
};

}  // namespace

double ToyContour(int contour, double excursion, double s) {
  switch (contour) {
    case 0: return excursion * (s - 0.5);
    case 1: return excursion * (0.5 - s);
    case 2: return excursion * (0.5 - std::abs(2.0 * s - 1.0));
    case 3: return excursion * (std::abs(2.0 * s - 1.0) - 0.5);
  }
  EMO_ERR("unknown contour shape " << contour);
}

double ToyEnvelope(const ToyGeneratorParams &p, double rate, double phase, double t) {
  double period = 1.0 / rate;
  double on = p.duty_cycle * period;
  double u = std::fmod(t + phase, period);
  if (u < 0) u += period;
  double shape = 0.0;
  if (u < on) {
    double ramp = std::min(p.ramp_seconds, 0.5 * on);
    double edge = std::min(u, on - u);
    shape = edge >= ramp ? 1.0 : 0.5 - 0.5 * std::cos(std::numbers::pi * edge / ramp);
  }
  return p.pause_level + (1.0 - p.pause_level) * shape;
}

std::vector<ToySpeaker> DrawToySpeakers(const ToyCorpusSpec &spec) {
  CheckSpec(spec);
  const auto &p = spec.params;
  std::vector<ToySpeaker> speakers;
  for (int s = 0; s < spec.n_speakers; ++s) {
    ToySpeaker spk;
    spk.id = SpeakerId(spec, s);
    Rng rng(DeriveSeed(spec.seed, "speaker:" + spk.id));
    spk.base_f0 = std::exp(rng.Uniform(std::log(p.speaker_f0_min), std::log(p.speaker_f0_max)));
    spk.formant_scale = rng.Uniform(p.formant_scale_min, p.formant_scale_max);
    spk.tilt = rng.Uniform(p.tilt_min, p.tilt_max);
    speakers.push_back(spk);
  }
  return speakers;
}

ToyUtterance GenerateToyUtterance(const ToyCorpusSpec &spec, const ToySpeaker &speaker,
                                  int class_index, int index) {
  CheckSpec(spec);
  if (class_index < 0 || class_index >= kNumEmotions)
    EMO_ERR("toy class index out of range: " << class_index);
  const auto &p = spec.params;
  const double fs = p.sample_rate;
  const double dur = spec.utterance_duration;

  ToyUtterance u;
  u.speaker = speaker;
  u.class_index = class_index;
  char buf[32];
  std::snprintf(buf, sizeof(buf), "_%c%03d", EmotionCode(EmotionFromIndex(class_index)), index);
  u.record.id = speaker.id + buf;
  u.record.speaker_id = speaker.id;
  u.record.label = EmotionFromIndex(class_index);
  u.record.corpus = spec.corpus;
  u.record.audio_path = "wav/" + u.record.id + ".wav";

  // Every factor is drawn in the same order whatever the coding factor, so
  // the non-coding draws have the same distribution for all classes.
  Rng rng(DeriveSeed(spec.seed, "utt:" + u.record.id));
  int rhythm_pick = static_cast<int>(rng.UniformInt(0, 3));
  int pitch_pick = static_cast<int>(rng.UniformInt(0, 3));
  int content_pick = static_cast<int>(rng.UniformInt(0, 3));
  switch (spec.coding_factor) {
    case CodingFactor::kRhythm: rhythm_pick = class_index; break;
    case CodingFactor::kPitch: pitch_pick = class_index; break;
    case CodingFactor::kContent: content_pick = class_index; break;
  }
  u.syllable_rate = p.syllable_rates[rhythm_pick] * (1.0 + rng.Uniform(-p.rate_jitter, p.rate_jitter));
  u.envelope_phase = rng.Uniform(0.0, 1.0 / u.syllable_rate);
  u.contour = pitch_pick;
  u.excursion = p.excursion + rng.Uniform(-p.excursion_jitter, p.excursion_jitter);
  u.vowel_rotation = content_pick;
  for (int b = 1; b < 4; ++b)
    u.vowel_boundaries.push_back(b * dur / 4.0 +
                                 rng.Uniform(-p.vowel_boundary_jitter, p.vowel_boundary_jitter));

  const size_t n = static_cast<size_t>(std::llround(dur * fs));
  std::vector<double> x(n);
  double phase_acc = 1.0;  // first impulse at t = 0
  double tilt_state = 0.0;
  Resonator res[3];

  auto formant = [&](int slot, int k) {
    const VowelTemplate &v = p.vowels[(slot + u.vowel_rotation) % 4];
    double f = k == 0 ? v.f1 : k == 1 ? v.f2 : v.f3;
    return f * speaker.formant_scale;
  };

  for (size_t i = 0; i < n; ++i) {
    double t = static_cast<double>(i) / fs;
    double f0 = speaker.base_f0 * std::pow(2.0, ToyContour(u.contour, u.excursion, t / dur) / 12.0);
    double impulse = 0.0;
    if (phase_acc >= 1.0) {
      phase_acc -= 1.0;
      impulse = 1.0;
    }
    phase_acc += f0 / fs;
    tilt_state = impulse + speaker.tilt * tilt_state;

    int slot = 0;
    while (slot < 3 && t >= u.vowel_boundaries[slot]) ++slot;
    // Linear formant glide across each boundary.
    double w = 0.0;
    int other = slot;
    double half = 0.5 * p.vowel_transition;
    if (slot > 0 && t - u.vowel_boundaries[slot - 1] < half) {
      other = slot - 1;
      w = 0.5 - (t - u.vowel_boundaries[slot - 1]) / (2 * half);
    } else if (slot < 3 && u.vowel_boundaries[slot] - t < half) {
      other = slot + 1;
      w = 0.5 - (u.vowel_boundaries[slot] - t) / (2 * half);
    }
    double y = tilt_state;
    for (int k = 0; k < 3; ++k) {
      double f = (1.0 - w) * formant(slot, k) + w * formant(other, k);
      y = res[k].Step(y, f, p.formant_bandwidths[k], fs);
    }
    x[i] = y * ToyEnvelope(p, u.syllable_rate, u.envelope_phase, t);
  }

  double energy = 0.0;
  for (double v : x) energy += v * v;
  double rms = std::sqrt(energy / static_cast<double>(n));
  double scale = rms > 0 ? p.target_rms / rms : 0.0;
  u.audio.sample_rate = p.sample_rate;
  u.audio.samples.resize(n);
  for (size_t i = 0; i < n; ++i)
    u.audio.samples[i] = QuantizeTo16Bit(std::clamp(x[i] * scale + p.noise_level * rng.Normal(),
                                                    -0.99, 0.99));
  u.record.duration = static_cast<double>(n) / fs;
  return u;
}

std::vector<ToyUtterance> GenerateToyCorpus(const ToyCorpusSpec &spec) {
  std::vector<ToyUtterance> out;
  for (const auto &spk : DrawToySpeakers(spec))
    for (int c = 0; c < kNumEmotions; ++c)
      for (int i = 0; i < spec.n_utterances_per_class; ++i)
        out.push_back(GenerateToyUtterance(spec, spk, c, i));
  return out;
}

CorpusManifest SynthToyCorpus(const ToyCorpusSpec &spec,
                              const std::filesystem::path &out_dir) {
  EnsureDirectory(out_dir / "wav");
  CorpusManifest manifest;
  std::string params_lines;
  for (const auto &spk : DrawToySpeakers(spec)) {
    for (int c = 0; c < kNumEmotions; ++c) {
      for (int i = 0; i < spec.n_utterances_per_class; ++i) {
        ToyUtterance u = GenerateToyUtterance(spec, spk, c, i);
        WriteWave16(out_dir / u.record.audio_path, u.audio);
        params_lines += u.ParamsJson().dump() + "\n";
        manifest.records.push_back(u.record);
      }
    }
  }
  WriteManifest(manifest, out_dir / "manifest.jsonl");
  WriteTextFile(out_dir / "toy_params.jsonl", params_lines);
  WriteJsonFile(out_dir / "toy_spec.json", spec.ToJson());
  return manifest;
}

}  // namespace emoflow
