// include/emoflow/feat/spectrogram-image.h

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

#ifndef EMOFLOW_FEAT_SPECTROGRAM_IMAGE_H_
#define EMOFLOW_FEAT_SPECTROGRAM_IMAGE_H_

#include <filesystem>
#include <string>

#include "emoflow/base/types.h"
#include "emoflow/feat/mel.h"

namespace emoflow {

struct ColorScale {
  double min_value = -12.0;
  double max_value = 4.0;
};

struct ImageOptions {
  ColorScale scale;
  int pixel_scale = 1;  // each logical pixel becomes pixel_scale^2 pixels
};

// 8-bit RGB PNG with a fixed perceptual colormap; values outside the scale
// are clamped.  values(r, c) is drawn at image row r, column c.  The color
// scale is stored in a tEXt chunk ("color_scale").  The output bytes depend
// only on the inputs.
void WriteHeatmapPng(const Matrix &values, const ColorScale &scale, int pixel_scale,
                     const std::filesystem::path &path,
                     const std::string &title = "");

/// Time on x, mel bin on y (low frequencies at the bottom).
void RenderSpectrogramImage(const MelSpectrogram &mel, const std::filesystem::path &path,
                            const ImageOptions &opts = {});

}  // namespace emoflow

#endif  // EMOFLOW_FEAT_SPECTROGRAM_IMAGE_H_
