// src/feat/spectrogram-image.cc

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

#include "emoflow/feat/spectrogram-image.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <vector>

#include <png.h>

#include "emoflow/base/error.h"

namespace emoflow {

namespace {

// Nine-stop approximation of viridis.
constexpr std::array<std::array<double, 3>, 9> kStops = {{{68, 1, 84},
                                                        {71, 44, 122},
                                                        {59, 81, 139},
                                                        {44, 113, 142},
                                                        {33, 144, 141},
                                                        {39, 173, 129},
                                                        {92, 200, 99},
                                                        {170, 220, 50},
                                                        {253, 231, 37}}};

std::array<unsigned char, 3> ColorOf(double v, const ColorScale &s) {
  double u = (v - s.min_value) / (s.max_value - s.min_value);
  if (!std::isfinite(u)) u = 0.0;
  u = std::clamp(u, 0.0, 1.0) * (kStops.size() - 1);
  size_t i = std::min(static_cast<size_t>(u), kStops.size() - 2);
  double f = u - i;
  std::array<unsigned char, 3> rgb;
  for (int c = 0; c < 3; ++c)
    rgb[c] = static_cast<unsigned char>(
        std::lround((1 - f) * kStops[i][c] + f * kStops[i + 1][c]));
  return rgb;
}

}  // namespace

void WriteHeatmapPng(const Matrix &values, const ColorScale &scale, int pixel_scale,
                     const std::filesystem::path &path, const std::string &title) {
  if (values.rows() == 0 || values.cols() == 0) EMO_ERR("cannot render an empty image");
  if (pixel_scale < 1) EMO_ERR("pixel scale must be positive");
  if (!(scale.max_value > scale.min_value)) EMO_ERR("color scale must have max > min");
  const int height = static_cast<int>(values.rows()) * pixel_scale;
  const int width = static_cast<int>(values.cols()) * pixel_scale;

  FILE *fp = std::fopen(path.string().c_str(), "wb");
  if (!fp) EMO_ERR("cannot open " << path.string() << " for writing");
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    std::fclose(fp);
    EMO_ERR("libpng initialization failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    std::fclose(fp);
    EMO_ERR("libpng failed writing " << path.string());
  }
  png_init_io(png, fp);
  png_set_IHDR(png, info, width, height, 8, PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  char scale_text[96];
  std::snprintf(scale_text, sizeof(scale_text), "min=%.6g max=%.6g colormap=viridis9",
                scale.min_value, scale.max_value);
  std::string key1 = "color_scale", key2 = "title";
  png_text text[2] = {};
  text[0].compression = PNG_TEXT_COMPRESSION_NONE;
  text[0].key = key1.data();
  text[0].text = scale_text;
  int num_text = 1;
  std::string title_copy = title;
  if (!title.empty()) {
    text[1].compression = PNG_TEXT_COMPRESSION_NONE;
    text[1].key = key2.data();
    text[1].text = title_copy.data();
    num_text = 2;
  }
  png_set_text(png, info, text, num_text);
  png_write_info(png, info);

  std::vector<png_byte> row(static_cast<size_t>(width) * 3);
  for (int r = 0; r < values.rows(); ++r) {
    for (int c = 0; c < values.cols(); ++c) {
      auto rgb = ColorOf(values(r, c), scale);
      for (int k = 0; k < pixel_scale; ++k)
        std::copy(rgb.begin(), rgb.end(), row.begin() + (c * pixel_scale + k) * 3);
    }
    for (int k = 0; k < pixel_scale; ++k) png_write_row(png, row.data());
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  if (std::fclose(fp) != 0) EMO_ERR("failed closing " << path.string());
}

void RenderSpectrogramImage(const MelSpectrogram &mel, const std::filesystem::path &path,
                            const ImageOptions &opts) {
  if (mel.frames.rows() == 0) EMO_ERR("cannot render an empty spectrogram");
  // Rows of the image are mel bins, highest bin on top.
  Matrix image = mel.frames.transpose().colwise().reverse();
  WriteHeatmapPng(image, opts.scale, opts.pixel_scale, path, "mel spectrogram");
}

}  // namespace emoflow
