// src/flow/factor-mask.cc

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

#include "emoflow/flow/factor-mask.h"

#include "emoflow/base/error.h"

namespace emoflow {

std::string FactorMask::Tag() const {
  std::string t = "---";
  if (content) t[0] = 'C';
  if (rhythm) t[1] = 'R';
  if (pitch) t[2] = 'P';
  return t;
}

FactorMask FactorMask::FromTag(const std::string &tag) {
  const char letters[] = {'C', 'R', 'P'};
  if (tag.size() != 3) EMO_USAGE_ERR("mask '" << tag << "' must have 3 characters over {C,R,P,-}");
  bool keep[3];
  for (int i = 0; i < 3; ++i) {
    char c = static_cast<char>(std::toupper(static_cast<unsigned char>(tag[i])));
    if (c == letters[i])
      keep[i] = true;
    else if (c == '-')
      keep[i] = false;
    else
      EMO_USAGE_ERR("mask '" << tag << "': position " << i + 1 << " must be '" << letters[i]
                    << "' or '-'");
  }
  return {keep[0], keep[1], keep[2]};
}

EncoderInputs MakeEncoderInputs(const MelSpectrogram &mel, const PitchContour &pitch) {
  if (!pitch.normalized) EMO_ERR("encoder inputs need a speaker-normalized pitch contour");
  if (pitch.NumFrames() != mel.NumFrames())
    EMO_ERR("misaligned mel (" << mel.NumFrames() << " frames) and pitch ("
            << pitch.NumFrames() << " frames)");
  EncoderInputs in;
  in.content = mel.frames;
  in.rhythm = mel.frames;
  in.pitch = PitchFeatureMatrix(pitch);
  return in;
}

EncoderInputs MaskInputs(const EncoderInputs &in, const FactorMask &mask) {
  if (in.content.rows() != in.rhythm.rows() || in.pitch.rows() != in.rhythm.rows())
    EMO_ERR("misaligned encoder inputs: " << in.content.rows() << ", " << in.rhythm.rows()
            << ", " << in.pitch.rows() << " frames");
  EncoderInputs out = in;
  if (!mask.content) out.content.setZero();
  if (!mask.rhythm) out.rhythm.setZero();
  if (!mask.pitch) out.pitch.setZero();
  return out;
}

EncoderInputs MaskInputs(const MelSpectrogram &mel, const PitchContour &pitch,
                         const FactorMask &mask) {
  return MaskInputs(MakeEncoderInputs(mel, pitch), mask);
}

}  // namespace emoflow
