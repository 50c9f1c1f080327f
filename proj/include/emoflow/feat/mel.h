// include/emoflow/feat/mel.h

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

#ifndef EMOFLOW_FEAT_MEL_H_
#define EMOFLOW_FEAT_MEL_H_

#include <memory>
#include <vector>

#include "emoflow/base/io.h"
#include "emoflow/base/types.h"
#include "emoflow/ingest/wave.h"

namespace emoflow {

inline constexpr int kNumMelBins = 80;

struct FrameOptions {
  int sample_rate = kStandardSampleRate;
  int window_size = 1024;  // 64 ms
  int hop_size = 256;      // 16 ms

  /// floor((num_samples - window) / hop) + 1, or 0 if shorter than a window.
  int NumFrames(size_t num_samples) const;
  double HopSeconds() const { return static_cast<double>(hop_size) / sample_rate; }
};

struct MelOptions {
  FrameOptions frame;
  int num_bins = kNumMelBins;
  double low_freq = 90.0;
  double high_freq = 7600.0;
  double floor = 1e-10;  // applied to filterbank magnitudes before the log

  Json ToJson() const;
};

struct MelSpectrogram {
  Matrix frames;  // T x 80, natural-log magnitudes
  double hop_seconds = 0.016;
  int sample_rate = kStandardSampleRate;

  int NumFrames() const { return static_cast<int>(frames.rows()); }
};

double HzToMel(double hz);
double MelToHz(double mel);

// Triangular filters (peak 1, linear in Hz) with centers equally spaced on
// the mel scale between low_freq and high_freq, applied to the magnitude
// spectrum of a periodic-Hann-windowed frame.
class MelComputer {
 public:
  explicit MelComputer(const MelOptions &opts = {});
  ~MelComputer();
  MelComputer(const MelComputer &) = delete;
  MelComputer &operator=(const MelComputer &) = delete;

  /// Throws if the waveform is shorter than one window or not at the
  /// configured rate.  Safe to call concurrently.
  MelSpectrogram Compute(const Waveform &w) const;

  /// Center frequency (Hz) of each mel bin.
  std::vector<double> BinCenters() const;
  const MelOptions &Options() const { return opts_; }

 private:
  struct Plan;
  MelOptions opts_;
  std::vector<double> window_;
  Matrix filters_;  // num_bins x (window/2 + 1)
  std::unique_ptr<Plan> plan_;
};

}  // namespace emoflow

#endif  // EMOFLOW_FEAT_MEL_H_
