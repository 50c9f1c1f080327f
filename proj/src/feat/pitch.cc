// src/feat/pitch.cc

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

#include "emoflow/feat/pitch.h"

#include <algorithm>
#include <cmath>
#include <complex>
#include <mutex>

#include <fftw3.h>

#include "emoflow/base/error.h"

namespace emoflow {

Json PitchOptions::ToJson() const {
  return {{"sample_rate", frame.sample_rate}, {"window_size", frame.window_size},
          {"hop_size", frame.hop_size},       {"min_f0", min_f0},
          {"max_f0", max_f0},                 {"threshold", threshold},
          {"silence_rms", silence_rms}};
}

int PitchContour::NumVoiced() const {
  int n = 0;
  for (uint8_t v : voiced) n += v ? 1 : 0;
  return n;
}

namespace {

std::mutex g_plan_mutex;

struct FftPair {
  int size;
  fftw_plan forward, backward;
  double *real;
  fftw_complex *spec;

  explicit FftPair(int n) : size(n) {
    std::lock_guard<std::mutex> lock(g_plan_mutex);
    real = fftw_alloc_real(n);
    spec = fftw_alloc_complex(n / 2 + 1);
    forward = fftw_plan_dft_r2c_1d(n, real, spec, FFTW_ESTIMATE);
    backward = fftw_plan_dft_c2r_1d(n, spec, real, FFTW_ESTIMATE);
  }
  ~FftPair() {
    std::lock_guard<std::mutex> lock(g_plan_mutex);
    fftw_destroy_plan(forward);
    fftw_destroy_plan(backward);
    fftw_free(real);
    fftw_free(spec);
  }
};

}  // namespace

PitchContour ExtractPitch(const Waveform &w, const PitchOptions &opts) {
  if (w.sample_rate != opts.frame.sample_rate)
    EMO_ERR("pitch extraction expects " << opts.frame.sample_rate << " Hz audio");
  const int win = opts.frame.window_size;
  const int fs = opts.frame.sample_rate;
  const int max_lag = std::min(win / 2, static_cast<int>(std::ceil(fs / opts.min_f0)));
  const int min_lag = std::max(2, static_cast<int>(std::floor(fs / opts.max_f0)));
  const int integ = win - max_lag;  // YIN integration window
  const int num_frames = opts.frame.NumFrames(w.samples.size());

  PitchContour c;
  c.f0.assign(std::max(0, num_frames), 0.0);
  c.voiced.assign(std::max(0, num_frames), 0);
  if (num_frames <= 0) return c;

  int nfft = 1;
  while (nfft < 2 * win) nfft <<= 1;
  FftPair fft(nfft);
  std::vector<std::complex<double>> head(nfft / 2 + 1);
  std::vector<double> diff(max_lag + 1), cmnd(max_lag + 1), prefix(win + 1);

  for (int t = 0; t < num_frames; ++t) {
    const double *x = w.samples.data() + static_cast<size_t>(t) * opts.frame.hop_size;
    double energy = 0.0;
    prefix[0] = 0.0;
    for (int i = 0; i < win; ++i) {
      energy += x[i] * x[i];
      prefix[i + 1] = prefix[i] + x[i] * x[i];
    }
    if (std::sqrt(energy / win) < opts.silence_rms) continue;

    // r(tau) = sum_{j<integ} x[j] x[j+tau]  via  IFFT(conj(F(head)) F(frame)).
    std::fill(fft.real, fft.real + nfft, 0.0);
    std::copy(x, x + integ, fft.real);
    fftw_execute(fft.forward);
    for (int k = 0; k <= nfft / 2; ++k) head[k] = {fft.spec[k][0], fft.spec[k][1]};
    std::fill(fft.real, fft.real + nfft, 0.0);
    std::copy(x, x + win, fft.real);
    fftw_execute(fft.forward);
    for (int k = 0; k <= nfft / 2; ++k) {
      std::complex<double> v = std::conj(head[k]) *
                               std::complex<double>(fft.spec[k][0], fft.spec[k][1]);
      fft.spec[k][0] = v.real();
      fft.spec[k][1] = v.imag();
    }
    fftw_execute(fft.backward);

    const double e0 = prefix[integ];
    diff[0] = 0.0;
    cmnd[0] = 1.0;
    double running = 0.0;
    for (int tau = 1; tau <= max_lag; ++tau) {
      double r = fft.real[tau] / nfft;
      double etau = prefix[tau + integ] - prefix[tau];
      diff[tau] = std::max(0.0, e0 + etau - 2.0 * r);
      running += diff[tau];
      cmnd[tau] = running > 0 ? diff[tau] * tau / running : 1.0;
    }

    int best = -1;
    for (int tau = min_lag; tau <= max_lag; ++tau) {
      if (cmnd[tau] < opts.threshold) {
        while (tau + 1 <= max_lag && cmnd[tau + 1] < cmnd[tau]) ++tau;
        best = tau;
        break;
      }
    }
    if (best < 0) continue;

    double period = best;
    if (best > min_lag && best < max_lag) {
      double a = cmnd[best - 1], b = cmnd[best], d = cmnd[best + 1];
      double denom = a - 2.0 * b + d;
      if (denom > 0) period = best + 0.5 * (a - d) / denom;
    }
    double f0 = static_cast<double>(fs) / period;
    if (f0 < opts.min_f0 || f0 > opts.max_f0) continue;
    c.f0[t] = f0;
    c.voiced[t] = 1;
  }
  return c;
}

SpeakerPitchStats ComputeSpeakerPitchStats(std::span<const PitchContour> contours,
                                           const std::string &speaker_id) {
  SpeakerPitchStats s;
  s.speaker_id = speaker_id;
  double sum = 0.0;
  for (const auto &c : contours) {
    if (c.normalized) EMO_ERR("pitch statistics need unnormalized contours");
    for (size_t t = 0; t < c.f0.size(); ++t) {
      if (c.voiced[t]) {
        sum += c.f0[t];
        ++s.n_voiced;
      }
    }
  }
  if (s.n_voiced == 0) return s;  // (0, 1, 0)
  s.mean = sum / static_cast<double>(s.n_voiced);
  double sq = 0.0;
  for (const auto &c : contours)
    for (size_t t = 0; t < c.f0.size(); ++t)
      if (c.voiced[t]) sq += (c.f0[t] - s.mean) * (c.f0[t] - s.mean);
  double sd = std::sqrt(sq / static_cast<double>(s.n_voiced));
  s.std = (s.n_voiced >= 2 && sd > 1e-12) ? sd : 1.0;
  return s;
}

PitchContour NormalizePitch(const PitchContour &c, const SpeakerPitchStats &stats) {
  if (c.normalized) EMO_ERR("pitch contour is already normalized");
  PitchContour out;
  out.normalized = true;
  out.voiced = c.voiced;
  out.f0.assign(c.f0.size(), 0.0);
  for (size_t t = 0; t < c.f0.size(); ++t)
    if (c.voiced[t]) out.f0[t] = (c.f0[t] - stats.mean) / stats.std;
  return out;
}

Matrix PitchFeatureMatrix(const PitchContour &c) {
  Matrix m(c.NumFrames(), 2);
  for (int t = 0; t < c.NumFrames(); ++t) {
    m(t, 0) = c.voiced[t] ? c.f0[t] : 0.0;
    m(t, 1) = c.voiced[t] ? 1.0 : 0.0;
  }
  return m;
}

}  // namespace emoflow
