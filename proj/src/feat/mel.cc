// src/feat/mel.cc

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

#include "emoflow/feat/mel.h"

#include <cmath>
#include <mutex>
#include <numbers>

#include <fftw3.h>

#include "emoflow/base/error.h"

namespace emoflow {

namespace {
// FFTW planning is not thread-safe; execution with new arrays is.
std::mutex g_fftw_plan_mutex;
}

int FrameOptions::NumFrames(size_t num_samples) const {
  if (num_samples < static_cast<size_t>(window_size)) return 0;
  return static_cast<int>((num_samples - window_size) / hop_size) + 1;
}

Json MelOptions::ToJson() const {
  return {{"sample_rate", frame.sample_rate}, {"window_size", frame.window_size},
          {"hop_size", frame.hop_size},       {"num_bins", num_bins},
          {"low_freq", low_freq},             {"high_freq", high_freq},
          {"floor", floor}};
}

double HzToMel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }
double MelToHz(double mel) { return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0); }

struct MelComputer::Plan {
  fftw_plan plan = nullptr;
};

MelComputer::MelComputer(const MelOptions &opts) : opts_(opts), plan_(new Plan) {
  const int n = opts_.frame.window_size;
  if (n <= 0 || opts_.frame.hop_size <= 0) EMO_ERR("bad frame options");
  if (opts_.num_bins <= 0) EMO_ERR("bad mel bin count");
  if (!(opts_.low_freq >= 0 && opts_.high_freq > opts_.low_freq &&
        opts_.high_freq <= 0.5 * opts_.frame.sample_rate))
    EMO_ERR("bad mel frequency range");
  window_.resize(n);
  for (int i = 0; i < n; ++i)
    window_[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * i / n);

  const int num_fft_bins = n / 2 + 1;
  filters_ = Matrix::Zero(opts_.num_bins, num_fft_bins);
  double mel_lo = HzToMel(opts_.low_freq), mel_hi = HzToMel(opts_.high_freq);
  double spacing = (mel_hi - mel_lo) / (opts_.num_bins + 1);
  for (int b = 0; b < opts_.num_bins; ++b) {
    double left = MelToHz(mel_lo + b * spacing);
    double center = MelToHz(mel_lo + (b + 1) * spacing);
    double right = MelToHz(mel_lo + (b + 2) * spacing);
    for (int k = 0; k < num_fft_bins; ++k) {
      double f = static_cast<double>(k) * opts_.frame.sample_rate / n;
      double w = 0.0;
      if (f > left && f <= center) w = (f - left) / (center - left);
      else if (f > center && f < right) w = (right - f) / (right - center);
      filters_(b, k) = w;
    }
  }

  std::lock_guard<std::mutex> lock(g_fftw_plan_mutex);
  double *in = fftw_alloc_real(n);
  fftw_complex *out = fftw_alloc_complex(num_fft_bins);
  plan_->plan = fftw_plan_dft_r2c_1d(n, in, out, FFTW_ESTIMATE);
  fftw_free(in);
  fftw_free(out);
}

MelComputer::~MelComputer() {
  if (plan_ && plan_->plan) {
    std::lock_guard<std::mutex> lock(g_fftw_plan_mutex);
    fftw_destroy_plan(plan_->plan);
  }
}

std::vector<double> MelComputer::BinCenters() const {
  double mel_lo = HzToMel(opts_.low_freq), mel_hi = HzToMel(opts_.high_freq);
  double spacing = (mel_hi - mel_lo) / (opts_.num_bins + 1);
  std::vector<double> c(opts_.num_bins);
  for (int b = 0; b < opts_.num_bins; ++b) c[b] = MelToHz(mel_lo + (b + 1) * spacing);
  return c;
}

MelSpectrogram MelComputer::Compute(const Waveform &w) const {
  if (w.sample_rate != opts_.frame.sample_rate)
    EMO_ERR("mel extraction expects " << opts_.frame.sample_rate << " Hz audio, got "
            << w.sample_rate);
  const int n = opts_.frame.window_size;
  const int num_frames = opts_.frame.NumFrames(w.samples.size());
  if (num_frames <= 0)
    EMO_ERR("waveform of " << w.samples.size() << " samples is shorter than one "
            << n << "-sample window");
  const int num_fft_bins = n / 2 + 1;

  double *in = fftw_alloc_real(n);
  fftw_complex *out = fftw_alloc_complex(num_fft_bins);
  Matrix magnitudes(num_frames, num_fft_bins);
  for (int t = 0; t < num_frames; ++t) {
    const double *src = w.samples.data() + static_cast<size_t>(t) * opts_.frame.hop_size;
    for (int i = 0; i < n; ++i) in[i] = src[i] * window_[i];
    fftw_execute_dft_r2c(plan_->plan, in, out);
    for (int k = 0; k < num_fft_bins; ++k)
      magnitudes(t, k) = std::hypot(out[k][0], out[k][1]);
  }
  fftw_free(in);
  fftw_free(out);

  MelSpectrogram mel;
  mel.hop_seconds = opts_.frame.HopSeconds();
  mel.sample_rate = opts_.frame.sample_rate;
  mel.frames = magnitudes * filters_.transpose();
  const double floor = opts_.floor;
  mel.frames = mel.frames.unaryExpr([floor](double v) { return std::log(std::max(v, floor)); });
  return mel;
}

}  // namespace emoflow
