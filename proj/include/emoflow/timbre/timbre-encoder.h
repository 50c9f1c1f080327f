// include/emoflow/timbre/timbre-encoder.h

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

#ifndef EMOFLOW_TIMBRE_TIMBRE_ENCODER_H_
#define EMOFLOW_TIMBRE_TIMBRE_ENCODER_H_

#include <filesystem>
#include <string>
#include <vector>

#include "emoflow/base/io.h"
#include "emoflow/nnet/adam.h"
#include "emoflow/nnet/nnet-layers.h"

namespace emoflow {

struct TimbreConfig {
  int hidden = 64;
  int d_t = 64;
  double leaky_slope = 0.2;
  int num_steps = 300;
  int batch_size = 16;
  nnet::AdamOptions adam;
  uint64_t seed = 0;
  int min_speakers = 4;
  int min_utterances_per_speaker = 8;

  TimbreConfig() { adam.learning_rate = 1e-3; }
  Json ToJson() const;
  static TimbreConfig FromJson(const Json &j);
};

struct SpeakerVector {
  Vector values;  // unit l2 norm
  std::string source_utterance;
};

// d-vector: a frame-wise MLP over the log-mel frames, temporal average
// pooling and a linear embedding layer.  The l2-normalized embedding is
// the speaker vector; a speaker classifier on top of the (unnormalized)
// embedding provides the training signal and is unused at inference.
class TimbreModel {
 public:
  TimbreModel() = default;
  TimbreModel(const TimbreConfig &config, const std::vector<std::string> &speakers);

  /// Unit-norm embedding.  Depends only on the mel frames and parameters.
  Vector Embed(const Matrix &mel) const;
  SpeakerVector Encode(const Matrix &mel, const std::string &utterance_id) const;
  /// Index into Speakers() of the most likely training speaker.
  int ClassifySpeaker(const Matrix &mel) const;
  /// Cross-entropy of the speaker classifier; gradients are accumulated.
  double AccumulateGradients(const Matrix &mel, int speaker_index);

  nnet::ParamList Params();
  const TimbreConfig &Config() const { return config_; }
  const std::vector<std::string> &Speakers() const { return speakers_; }
  int EmbeddingDim() const { return config_.d_t; }
  void SetNormalization(double mean, double stddev);

  void Write(std::ostream &os) const;
  void Read(std::istream &is);
  std::string Hash() const;

 private:
  Matrix Pooled(const Matrix &mel, Matrix *a1_pre, Matrix *a2_pre, Matrix *x) const;

  TimbreConfig config_;
  std::vector<std::string> speakers_;
  double norm_mean_ = 0.0, norm_std_ = 1.0;
  nnet::Linear frame1_, frame2_, embed_, classify_;
};

struct TimbreExample {
  std::string id;
  std::string speaker_id;
  Matrix mel;  // T x 80
};

/// Speaker-classification training; throws unless the data has at least
/// config.min_speakers speakers with config.min_utterances_per_speaker each.
TimbreModel TrainTimbreEncoder(const std::vector<TimbreExample> &data, const TimbreConfig &config,
                               std::vector<double> *loss_log = nullptr);

void SaveTimbreModel(const TimbreModel &model, const Json &provenance,
                     const std::filesystem::path &path);
TimbreModel LoadTimbreModel(const std::filesystem::path &path, Json *sidecar = nullptr);

}  // namespace emoflow

#endif  // EMOFLOW_TIMBRE_TIMBRE_ENCODER_H_
