// include/emoflow/flow/speechflow.h

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

#ifndef EMOFLOW_FLOW_SPEECHFLOW_H_
#define EMOFLOW_FLOW_SPEECHFLOW_H_

#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "emoflow/base/io.h"
#include "emoflow/feat/resample.h"
#include "emoflow/flow/factor-mask.h"
#include "emoflow/nnet/adam.h"
#include "emoflow/nnet/nnet-layers.h"

namespace emoflow {

struct SpeechFlowConfig {
  // Latent widths and temporal downsampling of each code.
  int d_c = 8, d_r = 2, d_f = 32, d_t = 64;
  int down_c = 8, down_r = 8, down_f = 8;
  // Recurrent widths (per direction).
  int hidden_c = 32, hidden_r = 8, hidden_f = 32, hidden_dec = 64;
  RandomResampleOptions rr;
  nnet::AdamOptions adam;
  int batch_size = 8;
  int num_steps = 600;
  int valid_every = 50;  // steps between validation passes
  uint64_t seed = 0;

  SpeechFlowConfig() { adam.learning_rate = 3e-3; }
  /// Per-frame latent width at the mel frame rate; must stay below 80.
  double BottleneckWidth() const;
  void Check() const;
  Json ToJson() const;
  static SpeechFlowConfig FromJson(const Json &j);
};

// Factor codes of one utterance.  z_t is the utterance-level timbre vector.
struct LatentBundle {
  Matrix z_r;  // ceil(T / down_r) x d_r
  Matrix z_f;  // ceil(T_f / down_f) x d_f
  Matrix z_c;  // ceil(T_c / down_c) x d_c
  Vector z_t;  // d_t
};

// Seeds of the random resampling applied to the content and pitch inputs;
// absent means identity (no resampling).
struct ResampleSeeds {
  uint64_t content = 0;
  uint64_t pitch = 0;
};

struct ReconstructionError {
  double sum_squares = 0.0;  // squared l2 norm of the difference
  double mean = 0.0;         // per entry
};

/// Throws on shape mismatch.
ReconstructionError ReconstructionLoss(const Matrix &s, const Matrix &s_hat);

// One training or evaluation item: unmasked encoder inputs, the target
// mel (equal to the unmasked spectrogram) and the timbre vector.
struct FlowExample {
  std::string id;
  EncoderInputs inputs;
  Vector z_t;
};

class SpeechFlowModel {
 public:
  SpeechFlowModel() = default;
  /// Random initialization from config.seed.
  explicit SpeechFlowModel(const SpeechFlowConfig &config);

  /// Latent codes.  With seeds, the content and pitch inputs are randomly
  /// resampled first.
  LatentBundle Encode(const EncoderInputs &in, const Vector &z_t,
                      const std::optional<ResampleSeeds> &rr = std::nullopt) const;
  /// T x 80 log-mel reconstruction of target_length frames.
  Matrix Decode(const LatentBundle &bundle, int target_length) const;
  /// Encode without resampling, then decode at the input length.
  Matrix Reconstruct(const EncoderInputs &in, const Vector &z_t) const;

  /// Adds the gradient of the per-entry mean squared error (in the
  /// normalized mel domain) to the parameter gradients; returns that error.
  double AccumulateGradients(const FlowExample &ex, const std::optional<ResampleSeeds> &rr);

  nnet::ParamList Params();
  const SpeechFlowConfig &Config() const { return config_; }
  /// Global affine normalization applied to mel before the encoders and
  /// inverted after the decoder.
  void SetNormalization(double mean, double stddev);
  double NormMean() const { return norm_mean_; }
  double NormStd() const { return norm_std_; }

  void Write(std::ostream &os) const;
  void Read(std::istream &is);
  /// Hash of the serialized parameters.
  std::string Hash() const;

 private:
  struct Cache;
  Matrix Normalize(const Matrix &mel) const;
  Matrix EncodeStream(int which, const Matrix &x, Cache *cache) const;
  Matrix DecoderInput(const LatentBundle &b, int target_length) const;

  SpeechFlowConfig config_;
  double norm_mean_ = 0.0, norm_std_ = 1.0;
  nnet::BiLstm rnn_c_, rnn_r_, rnn_f_, rnn_dec_;
  nnet::Linear proj_c_, proj_r_, proj_f_, proj_dec_;
};

struct FlowTrainLog {
  std::vector<double> train_loss;                 // per step, batch mean
  std::vector<std::pair<int, double>> valid_loss;  // (step, loss)
  int best_step = 0;
  double best_valid_loss = 0.0;
};

using StepCallback = std::function<void(int step, double train_loss)>;

// Minibatch Adam on the reconstruction loss with fresh resampling seeds
// for every example of every step.  When validation data is given the
// returned model holds the parameters of the best validation pass;
// otherwise the final ones.  Throws if the loss becomes non-finite.
SpeechFlowModel TrainSpeechFlow(const std::vector<FlowExample> &train,
                                const std::vector<FlowExample> &valid,
                                const SpeechFlowConfig &config, FlowTrainLog *log,
                                const StepCallback &on_step = nullptr);

/// Mean per-entry reconstruction error without resampling.
double EvaluateSpeechFlow(const SpeechFlowModel &model, const std::vector<FlowExample> &data,
                          const FactorMask &mask = FactorMask::All());

// Reconstructed mel spectrograms of a corpus under one mask.
struct ReconstructedCorpus {
  std::string mask_tag;
  std::string model_hash;
  std::map<std::string, Matrix> mels;
};

ReconstructedCorpus ReconstructCorpus(const std::vector<FlowExample> &data,
                                      const FactorMask &mask, const SpeechFlowModel &model);

/// Sum over the corpus of the squared error of predicting every frame by
/// the corpus mean frame, and of the model's full-mask reconstruction.
struct FidelityReport {
  double model_mse = 0.0;
  double mean_frame_mse = 0.0;
};
FidelityReport MeasureFidelity(const SpeechFlowModel &model, const std::vector<FlowExample> &data);

// Artifact: the parameter blob at `path` and a JSON sidecar at
// `path`.json (config, seed, feature-config hash, corpus id, validation
// loss, parameter hash).
void SaveSpeechFlow(const SpeechFlowModel &model, const Json &provenance,
                    const std::filesystem::path &path);
SpeechFlowModel LoadSpeechFlow(const std::filesystem::path &path, Json *sidecar = nullptr);

}  // namespace emoflow

#endif  // EMOFLOW_FLOW_SPEECHFLOW_H_
