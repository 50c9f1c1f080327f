// src/ingest/wave.cc

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

#include "emoflow/ingest/wave.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <numbers>

#include "emoflow/base/error.h"

namespace emoflow {

namespace {

uint32_t Le32(const unsigned char *p) {
  return p[0] | (p[1] << 8) | (p[2] << 16) | (static_cast<uint32_t>(p[3]) << 24);
}
uint16_t Le16(const unsigned char *p) { return static_cast<uint16_t>(p[0] | (p[1] << 8)); }

void Put32(std::string *s, uint32_t v) {
  for (int i = 0; i < 4; ++i) s->push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}
void Put16(std::string *s, uint16_t v) {
  s->push_back(static_cast<char>(v & 0xff));
  s->push_back(static_cast<char>(v >> 8));
}

}  // namespace

MultiChannelAudio ReadWave(const std::filesystem::path &path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) EMO_ERR("cannot open audio file " << path.string());
  std::vector<unsigned char> buf((std::istreambuf_iterator<char>(is)),
                                 std::istreambuf_iterator<char>());
  if (buf.size() < 12 || std::memcmp(buf.data(), "RIFF", 4) != 0 ||
      std::memcmp(buf.data() + 8, "WAVE", 4) != 0)
    EMO_ERR(path.string() << ": not a RIFF/WAVE file");

  int format = 0, channels = 0, rate = 0, bits = 0;
  const unsigned char *data = nullptr;
  size_t data_size = 0;
  size_t pos = 12;
  while (pos + 8 <= buf.size()) {
    const unsigned char *chunk = buf.data() + pos;
    uint32_t size = Le32(chunk + 4);
    size_t body = pos + 8;
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (size < 16 || body + 16 > buf.size()) EMO_ERR(path.string() << ": short fmt chunk");
      format = Le16(buf.data() + body);
      channels = Le16(buf.data() + body + 2);
      rate = static_cast<int>(Le32(buf.data() + body + 4));
      bits = Le16(buf.data() + body + 14);
      if (format == 0xFFFE && size >= 26)  // WAVE_FORMAT_EXTENSIBLE
        format = Le16(buf.data() + body + 24);
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      data = buf.data() + body;
      data_size = std::min<size_t>(size, buf.size() - body);
    }
    pos = body + size + (size & 1);
  }
  if (channels <= 0 || rate <= 0) EMO_ERR(path.string() << ": missing fmt chunk");
  if (!data) EMO_ERR(path.string() << ": missing data chunk");
  if (!(format == 1 && (bits == 8 || bits == 16 || bits == 24 || bits == 32)) &&
      !(format == 3 && bits == 32))
    EMO_ERR(path.string() << ": unsupported sample format " << format << "/" << bits
            << " bits");

  MultiChannelAudio audio;
  audio.sample_rate = rate;
  audio.bit_depth = bits;
  audio.channels.assign(channels, {});
  size_t bytes = bits / 8;
  size_t frames = data_size / (bytes * channels);
  for (auto &c : audio.channels) c.resize(frames);
  for (size_t i = 0; i < frames; ++i) {
    for (int c = 0; c < channels; ++c) {
      const unsigned char *p = data + (i * channels + c) * bytes;
      double v;
      if (format == 3) {
        float f;
        std::memcpy(&f, p, 4);
        v = f;
      } else if (bits == 8) {
        v = (static_cast<int>(p[0]) - 128) / 128.0;
      } else if (bits == 16) {
        v = std::max(-1.0, static_cast<int16_t>(Le16(p)) / 32767.0);
      } else if (bits == 24) {
        int32_t s = (p[0] << 8) | (p[1] << 16) | (static_cast<int32_t>(p[2]) << 24);
        v = (s >> 8) / 8388608.0;
      } else {
        v = static_cast<int32_t>(Le32(p)) / 2147483648.0;
      }
      audio.channels[c][i] = v;
    }
  }
  return audio;
}

double QuantizeTo16Bit(double x) {
  double c = std::clamp(x, -1.0, 1.0);
  return std::round(c * 32767.0) / 32767.0;
}

void WriteWave16(const std::filesystem::path &path, const Waveform &w) {
  std::string out;
  uint32_t data_bytes = static_cast<uint32_t>(w.samples.size() * 2);
  out.reserve(44 + data_bytes);
  out += "RIFF";
  Put32(&out, 36 + data_bytes);
  out += "WAVEfmt ";
  Put32(&out, 16);
  Put16(&out, 1);
  Put16(&out, 1);
  Put32(&out, static_cast<uint32_t>(w.sample_rate));
  Put32(&out, static_cast<uint32_t>(w.sample_rate * 2));
  Put16(&out, 2);
  Put16(&out, 16);
  out += "data";
  Put32(&out, data_bytes);
  for (double x : w.samples) {
    long s = std::lround(std::clamp(x, -1.0, 1.0) * 32767.0);
    Put16(&out, static_cast<uint16_t>(static_cast<int16_t>(s)));
  }
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) EMO_ERR("cannot open " << path.string() << " for writing");
  os.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!os) EMO_ERR("write failed: " << path.string());
}

std::vector<double> ResampleSignal(const std::vector<double> &in, int in_rate,
                                   int out_rate, int num_zeros) {
  if (in_rate == out_rate) return in;
  size_t out_len = static_cast<size_t>(
      std::llround(static_cast<double>(in.size()) * out_rate / in_rate));
  double cutoff = 0.99 * 0.5 * std::min(in_rate, out_rate);  // Hz
  double half_width = num_zeros / (2.0 * cutoff);               // seconds
  std::vector<double> out(out_len, 0.0);
  const double pi = std::numbers::pi;
  for (size_t n = 0; n < out_len; ++n) {
    double t = static_cast<double>(n) / out_rate;
    long first = static_cast<long>(std::ceil((t - half_width) * in_rate));
    long last = static_cast<long>(std::floor((t + half_width) * in_rate));
    double acc = 0.0;
    for (long k = std::max(0L, first);
         k <= std::min(last, static_cast<long>(in.size()) - 1); ++k) {
      double dt = t - static_cast<double>(k) / in_rate;
      double window = 0.5 + 0.5 * std::cos(pi * dt / half_width);
      double x = 2.0 * pi * cutoff * dt;
      double sinc = (std::abs(x) < 1e-12) ? 1.0 : std::sin(x) / x;
      acc += in[k] * window * sinc * (2.0 * cutoff / in_rate);
    }
    out[n] = acc;
  }
  return out;
}

Waveform StandardizeAudio(const MultiChannelAudio &audio,
                          const StandardizeOptions &opts) {
  if (audio.sample_rate < opts.min_rate || audio.sample_rate > opts.max_rate)
    EMO_ERR("unsupported sample rate " << audio.sample_rate << " Hz (supported: "
            << opts.min_rate << "-" << opts.max_rate << ")");
  if (audio.channels.empty()) EMO_ERR("audio has no channels");
  size_t n = audio.NumSamples();
  std::vector<double> mono(n, 0.0);
  for (const auto &c : audio.channels) {
    if (c.size() != n) EMO_ERR("channels have different lengths");
    for (size_t i = 0; i < n; ++i) mono[i] += c[i];
  }
  double inv = 1.0 / static_cast<double>(audio.channels.size());
  for (double &x : mono) x *= inv;

  Waveform w;
  w.sample_rate = kStandardSampleRate;
  w.samples = ResampleSignal(mono, audio.sample_rate, kStandardSampleRate,
                             opts.num_zeros);
  for (double &x : w.samples) x = QuantizeTo16Bit(x);
  return w;
}

}  // namespace emoflow
