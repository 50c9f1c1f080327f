// include/emoflow/flow/factor-mask.h

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

#ifndef EMOFLOW_FLOW_FACTOR_MASK_H_
#define EMOFLOW_FLOW_FACTOR_MASK_H_

#include <string>

#include "emoflow/base/types.h"
#include "emoflow/feat/mel.h"
#include "emoflow/feat/pitch.h"

namespace emoflow {

// Which factors survive a reconstruction (true = preserved).  Timbre is
// always preserved.
struct FactorMask {
  bool content = true;
  bool rhythm = true;
  bool pitch = true;

  /// Three characters over {C, R, P, -} in content, rhythm, pitch order,
  /// e.g. "CRP", "-R-".
  std::string Tag() const;
  static FactorMask FromTag(const std::string &tag);
  static FactorMask All() { return {true, true, true}; }
  static FactorMask None() { return {false, false, false}; }
  bool operator==(const FactorMask &o) const {
    return content == o.content && rhythm == o.rhythm && pitch == o.pitch;
  }
  bool operator!=(const FactorMask &o) const { return !(*this == o); }
};

// The three encoder inputs of one utterance: the content and rhythm copies
// of the log-mel spectrogram (T x 80) and the pitch input (T x 2:
// normalized f0, voiced bit).
struct EncoderInputs {
  Matrix content;
  Matrix rhythm;
  Matrix pitch;

  int NumFrames() const { return static_cast<int>(rhythm.rows()); }
};

/// Throws if the pitch contour is not normalized or not frame-aligned.
EncoderInputs MakeEncoderInputs(const MelSpectrogram &mel, const PitchContour &pitch);

/// Zeroes the input of every removed factor, keeping shapes.
EncoderInputs MaskInputs(const EncoderInputs &in, const FactorMask &mask);
EncoderInputs MaskInputs(const MelSpectrogram &mel, const PitchContour &pitch,
                         const FactorMask &mask);

}  // namespace emoflow

#endif  // EMOFLOW_FLOW_FACTOR_MASK_H_
