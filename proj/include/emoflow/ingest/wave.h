// include/emoflow/ingest/wave.h

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

#ifndef EMOFLOW_INGEST_WAVE_H_
#define EMOFLOW_INGEST_WAVE_H_

#include <filesystem>
#include <vector>

namespace emoflow {

inline constexpr int kStandardSampleRate = 16000;

// Mono signal with samples nominally in [-1, 1].
struct Waveform {
  std::vector<double> samples;
  int sample_rate = kStandardSampleRate;

  double Duration() const {
    return static_cast<double>(samples.size()) / sample_rate;
  }
};

// Raw decoded audio, one vector per channel.
struct MultiChannelAudio {
  std::vector<std::vector<double>> channels;
  int sample_rate = 0;
  int bit_depth = 16;

  size_t NumSamples() const { return channels.empty() ? 0 : channels[0].size(); }
};

/// RIFF/WAVE reader: PCM 8/16/24/32-bit integer and 32-bit float.
MultiChannelAudio ReadWave(const std::filesystem::path &path);
/// Writes 16-bit mono PCM; samples are clipped to [-1, 1].
void WriteWave16(const std::filesystem::path &path, const Waveform &w);

struct StandardizeOptions {
  int min_rate = 8000;
  int max_rate = 48000;
  /// Zero crossings on each side of the windowed-sinc kernel.
  int num_zeros = 16;
};

// Mono (channel mean), 16 kHz, samples snapped to the 16-bit grid.  The
// output length is round(n * 16000 / rate).
Waveform StandardizeAudio(const MultiChannelAudio &audio,
                          const StandardizeOptions &opts = {});

/// Band-limited resampling between arbitrary rates.
std::vector<double> ResampleSignal(const std::vector<double> &in, int in_rate,
                                   int out_rate, int num_zeros = 16);

/// round(x * 32767) / 32767 with clipping.
double QuantizeTo16Bit(double x);

}  // namespace emoflow

#endif  // EMOFLOW_INGEST_WAVE_H_
