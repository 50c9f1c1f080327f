// include/emoflow/feat/pitch.h

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

#ifndef EMOFLOW_FEAT_PITCH_H_
#define EMOFLOW_FEAT_PITCH_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "emoflow/base/io.h"
#include "emoflow/base/types.h"
#include "emoflow/feat/mel.h"

namespace emoflow {

struct PitchOptions {
  FrameOptions frame;  // must match the mel frame options for alignment
  double min_f0 = 50.0;
  double max_f0 = 600.0;
  /// Voiced when the cumulative-mean-normalized difference dips below this.
  double threshold = 0.3;
  /// Frames with RMS below this are unvoiced without analysis.
  double silence_rms = 1e-4;

  Json ToJson() const;
};

struct PitchContour {
  std::vector<double> f0;       // Hz, or z-units once normalized; 0 if unvoiced
  std::vector<uint8_t> voiced;  // 1 = voiced
  bool normalized = false;

  int NumFrames() const { return static_cast<int>(f0.size()); }
  int NumVoiced() const;
};

struct SpeakerPitchStats {
  std::string speaker_id;
  double mean = 0.0;  // Hz
  double std = 1.0;   // Hz, population; 1 when degenerate
  int64_t n_voiced = 0;
};

// YIN: difference function via FFT cross-correlation, cumulative mean
// normalization, first dip below threshold, parabolic refinement.  Frame t
// analyses samples [t*hop, t*hop + window), the same span as the mel frame.
PitchContour ExtractPitch(const Waveform &w, const PitchOptions &opts = {});

/// Pools voiced frames of all contours; degenerate cases give std = 1.
SpeakerPitchStats ComputeSpeakerPitchStats(std::span<const PitchContour> contours,
                                           const std::string &speaker_id);

/// (f0 - mean) / std on voiced frames, 0 elsewhere.  Throws if already
/// normalized.
PitchContour NormalizePitch(const PitchContour &c, const SpeakerPitchStats &stats);

/// T x 2 encoder input: [normalized value, voiced bit].
Matrix PitchFeatureMatrix(const PitchContour &c);

}  // namespace emoflow

#endif  // EMOFLOW_FEAT_PITCH_H_
