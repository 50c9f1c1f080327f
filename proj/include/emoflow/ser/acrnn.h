// include/emoflow/ser/acrnn.h

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

#ifndef EMOFLOW_SER_ACRNN_H_
#define EMOFLOW_SER_ACRNN_H_

#include <filesystem>
#include <string>
#include <vector>

#include "emoflow/base/io.h"
#include "emoflow/nnet/adam.h"
#include "emoflow/nnet/nnet-layers.h"

namespace emoflow {

struct AcrnnConfig {
  int num_bins = 80;
  int conv1_channels = 4;
  int conv_channels = 4;
  int num_conv_layers = 2;  // after the pooled first layer
  int kernel_t = 5, kernel_f = 3;
  int pool_t = 2, pool_f = 4;
  int fc_dim = 32;
  int rnn_hidden = 16;  // per direction
  int att_dim = 16;
  double leaky_slope = 0.01;
  int num_steps = 300;
  int batch_size = 16;
  int valid_every = 20;
  /// Validation passes without improvement before stopping; 0 disables.
  int patience = 5;
  nnet::AdamOptions adam;
  bool class_weights = false;  // inverse-frequency loss weights
  uint64_t seed = 0;

  AcrnnConfig() { adam.learning_rate = 1e-3; }
  Json ToJson() const;
  static AcrnnConfig FromJson(const Json &j);
  void Check() const;
};

// Static log-mel, its forward difference along time (last difference
// repeated) and the difference of that: an image of T x bins x 3.
struct AcrnnInput {
  nnet::Image image;
  int NumFrames() const { return image.height; }
};

/// Throws for fewer than 3 frames.
AcrnnInput MakeAcrnnInput(const Matrix &mel);

struct EmotionPosterior {
  Vector probs;      // over A, H, S, N
  Vector attention;  // weights over the pooled frame sequence
  /// Argmax; ties go to the lowest class index.
  int Predicted() const;
};

/// Argmax with ties broken towards the lowest index.
int ArgmaxLowest(const Vector &v);

// Mel dataset of one factor configuration.  The tag names the mask that
// produced the features ("raw" for original spectrograms).
struct SerExample {
  std::string id;
  Matrix mel;
  int label = 0;
  std::string mask_tag;
};

class AcrnnModel {
 public:
  AcrnnModel() = default;
  AcrnnModel(const AcrnnConfig &config, const std::string &mask_tag);

  EmotionPosterior Forward(const AcrnnInput &x) const;
  /// Weighted cross-entropy; gradients are accumulated.
  double AccumulateGradients(const AcrnnInput &x, int label, double weight = 1.0);
  /// Attention-pooled utterance vector, exposed for consistency checks.
  Matrix PooledVector(const AcrnnInput &x, Vector *alpha, Matrix *frames) const;

  nnet::ParamList Params();
  const AcrnnConfig &Config() const { return config_; }
  const std::string &MaskTag() const { return mask_tag_; }
  /// Per-channel input normalization (mean, std for each of 3 channels).
  void SetNormalization(const std::vector<double> &mean, const std::vector<double> &stddev);

  void Write(std::ostream &os) const;
  void Read(std::istream &is);
  std::string Hash() const;

 private:
  struct Cache;
  Matrix Frames(const AcrnnInput &x, Cache *cache) const;

  AcrnnConfig config_;
  std::string mask_tag_;
  std::vector<double> norm_mean_ = {0, 0, 0}, norm_std_ = {1, 1, 1};
  nnet::Conv2d conv1_;
  nnet::MaxPool2d pool_;
  std::vector<nnet::Conv2d> convs_;
  nnet::Linear fc_;
  nnet::BiLstm rnn_;
  nnet::AttentionPool att_;
  nnet::Linear out_;
};

struct AcrnnTrainLog {
  std::vector<double> train_loss;
  std::vector<std::pair<int, double>> valid_uar;
  int best_step = 0;
  double best_valid_uar = 0.0;
  int steps_run = 0;
};

// Early-stopped on validation UAR; the returned model holds the best
// validation parameters.  Every example of both sets must carry mask_tag.
AcrnnModel TrainAcrnn(const std::vector<SerExample> &train, const std::vector<SerExample> &valid,
                      const AcrnnConfig &config, const std::string &mask_tag,
                      AcrnnTrainLog *log = nullptr);

/// Predicted class per example; throws if an example's tag differs from
/// the model's.
std::vector<int> PredictAcrnn(const AcrnnModel &model, const std::vector<SerExample> &data);

void SaveAcrnn(const AcrnnModel &model, const Json &provenance, const std::filesystem::path &path);
AcrnnModel LoadAcrnn(const std::filesystem::path &path, Json *sidecar = nullptr);

}  // namespace emoflow

#endif  // EMOFLOW_SER_ACRNN_H_
