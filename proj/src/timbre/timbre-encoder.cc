// src/timbre/timbre-encoder.cc

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

#include "emoflow/timbre/timbre-encoder.h"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "emoflow/base/error.h"
#include "emoflow/base/random.h"
#include "emoflow/feat/mel.h"

namespace emoflow {

namespace {
const char kTimbreMagic[] = "EMOTIMB1";
}

Json TimbreConfig::ToJson() const {
  return {{"hidden", hidden},
          {"d_t", d_t},
          {"leaky_slope", leaky_slope},
          {"num_steps", num_steps},
          {"batch_size", batch_size},
          {"adam", adam.ToJson()},
          {"seed", seed},
          {"min_speakers", min_speakers},
          {"min_utterances_per_speaker", min_utterances_per_speaker}};
}

TimbreConfig TimbreConfig::FromJson(const Json &j) {
  TimbreConfig c;
  c.hidden = j.at("hidden");
  c.d_t = j.at("d_t");
  c.leaky_slope = j.at("leaky_slope");
  c.num_steps = j.at("num_steps");
  c.batch_size = j.at("batch_size");
  const Json &a = j.at("adam");
  c.adam.learning_rate = a.at("learning_rate");
  c.adam.beta1 = a.at("beta1");
  c.adam.beta2 = a.at("beta2");
  c.adam.epsilon = a.at("epsilon");
  c.adam.clip_norm = a.at("clip_norm");
  c.seed = j.at("seed");
  c.min_speakers = j.at("min_speakers");
  c.min_utterances_per_speaker = j.at("min_utterances_per_speaker");
  return c;
}

TimbreModel::TimbreModel(const TimbreConfig &config, const std::vector<std::string> &speakers)
    : config_(config), speakers_(speakers) {
  if (speakers.empty()) EMO_ERR("timbre model needs at least one training speaker");
  if (config.hidden < 1 || config.d_t < 1) EMO_ERR("bad timbre model widths");
  Rng rng(DeriveSeed(config.seed, "timbre-init"));
  frame1_ = nnet::Linear("timbre.frame1", kNumMelBins, config.hidden, &rng);
  frame2_ = nnet::Linear("timbre.frame2", config.hidden, config.hidden, &rng);
  embed_ = nnet::Linear("timbre.embed", config.hidden, config.d_t, &rng);
  classify_ = nnet::Linear("timbre.classify", config.d_t, static_cast<int>(speakers.size()), &rng);
}

nnet::ParamList TimbreModel::Params() {
  nnet::ParamList p;
  frame1_.Params(&p);
  frame2_.Params(&p);
  embed_.Params(&p);
  classify_.Params(&p);
  return p;
}

void TimbreModel::SetNormalization(double mean, double stddev) {
  if (!(stddev > 0.0) || !std::isfinite(mean)) EMO_ERR("bad mel normalization");
  norm_mean_ = mean;
  norm_std_ = stddev;
}

Matrix TimbreModel::Pooled(const Matrix &mel, Matrix *a1_pre, Matrix *a2_pre, Matrix *x) const {
  if (mel.rows() == 0) EMO_ERR("timbre encoding of an empty spectrogram");
  if (mel.cols() != kNumMelBins) EMO_ERR("timbre encoder expects " << kNumMelBins << " mel bins");
  Matrix xn = ((mel.array() - norm_mean_) / norm_std_).matrix();
  Matrix p1 = frame1_.Forward(xn);
  Matrix h1 = nnet::LeakyRelu(p1, config_.leaky_slope);
  Matrix p2 = frame2_.Forward(h1);
  Matrix h2 = nnet::LeakyRelu(p2, config_.leaky_slope);
  Matrix pooled = h2.colwise().mean();
  if (a1_pre) *a1_pre = std::move(p1);
  if (a2_pre) *a2_pre = std::move(p2);
  if (x) *x = std::move(xn);
  return pooled;
}

Vector TimbreModel::Embed(const Matrix &mel) const {
  Matrix e = embed_.Forward(Pooled(mel, nullptr, nullptr, nullptr));
  return nnet::L2Normalize(e.row(0).transpose());
}

SpeakerVector TimbreModel::Encode(const Matrix &mel, const std::string &utterance_id) const {
  return {Embed(mel), utterance_id};
}

int TimbreModel::ClassifySpeaker(const Matrix &mel) const {
  Matrix logits = classify_.Forward(embed_.Forward(Pooled(mel, nullptr, nullptr, nullptr)));
  Eigen::Index best;
  logits.row(0).maxCoeff(&best);
  return static_cast<int>(best);
}

double TimbreModel::AccumulateGradients(const Matrix &mel, int speaker_index) {
  if (speaker_index < 0 || speaker_index >= static_cast<int>(speakers_.size()))
    EMO_ERR("speaker index " << speaker_index << " out of range");
  Matrix p1, p2, xn;
  Matrix pooled = Pooled(mel, &p1, &p2, &xn);
  const double s = config_.leaky_slope;
  nnet::Linear::Cache c1, c2, ce, cc;
  c1.x = std::move(xn);
  c2.x = nnet::LeakyRelu(p1, s);
  Matrix e = embed_.Forward(pooled, &ce);
  Matrix logits = classify_.Forward(e, &cc);
  Vector dlogits;
  double loss = nnet::SoftmaxCrossEntropy(logits.row(0).transpose(), speaker_index, &dlogits);
  Matrix de = classify_.Backward(cc, dlogits.transpose());
  Matrix dpooled = embed_.Backward(ce, de);
  const int T = static_cast<int>(mel.rows());
  Matrix dh2 = dpooled.replicate(T, 1) / T;
  Matrix dh1 = frame2_.Backward(c2, nnet::LeakyReluBackward(p2, dh2, s));
  frame1_.Backward(c1, nnet::LeakyReluBackward(p1, dh1, s));
  return loss;
}

void TimbreModel::Write(std::ostream &os) const {
  os.write(kTimbreMagic, 8);
  WriteString(os, config_.ToJson().dump());
  Json spk = speakers_;
  WriteString(os, spk.dump());
  WriteDoubles(os, {norm_mean_, norm_std_});
  nnet::WriteParams(os, const_cast<TimbreModel *>(this)->Params());
}

void TimbreModel::Read(std::istream &is) {
  char magic[8];
  is.read(magic, 8);
  if (!is || std::string(magic, 8) != kTimbreMagic) EMO_ERR("not a timbre model blob");
  TimbreConfig config = TimbreConfig::FromJson(Json::parse(ReadString(is)));
  std::vector<std::string> speakers = Json::parse(ReadString(is)).get<std::vector<std::string>>();
  std::vector<double> norm = ReadDoubles(is);
  if (norm.size() != 2) EMO_ERR("corrupt timbre normalization block");
  *this = TimbreModel(config, speakers);
  norm_mean_ = norm[0];
  norm_std_ = norm[1];
  nnet::ReadParams(is, Params());
}

std::string TimbreModel::Hash() const {
  std::ostringstream os;
  Write(os);
  return HashHex(os.str());
}

TimbreModel TrainTimbreEncoder(const std::vector<TimbreExample> &data, const TimbreConfig &config,
                               std::vector<double> *loss_log) {
  std::map<std::string, int> counts;
  for (const auto &ex : data) ++counts[ex.speaker_id];
  std::vector<std::string> speakers;
  for (const auto &[spk, n] : counts)
    if (n >= config.min_utterances_per_speaker) speakers.push_back(spk);
  if (static_cast<int>(speakers.size()) < config.min_speakers)
    EMO_ERR("timbre training needs at least " << config.min_speakers << " speakers with "
            << config.min_utterances_per_speaker << " utterances each; got " << speakers.size());
  std::map<std::string, int> index;
  for (size_t i = 0; i < speakers.size(); ++i) index[speakers[i]] = static_cast<int>(i);
  std::vector<int> usable;
  for (size_t i = 0; i < data.size(); ++i)
    if (index.count(data[i].speaker_id)) usable.push_back(static_cast<int>(i));

  TimbreModel model(config, speakers);
  double sum = 0.0, sum2 = 0.0, n = 0.0;
  for (int i : usable) {
    sum += data[i].mel.sum();
    sum2 += data[i].mel.squaredNorm();
    n += static_cast<double>(data[i].mel.size());
  }
  const double mean = sum / n;
  model.SetNormalization(mean, std::sqrt(std::max(sum2 / n - mean * mean, 1e-12)));

  nnet::ParamList params = model.Params();
  nnet::Adam adam(params, config.adam);
  Rng rng(DeriveSeed(config.seed, "timbre-order"));
  size_t pos = usable.size();
  const int B = std::min<int>(config.batch_size, static_cast<int>(usable.size()));
  for (int step = 1; step <= config.num_steps; ++step) {
    double loss = 0.0;
    for (int k = 0; k < B; ++k) {
      if (pos == usable.size()) {
        rng.Shuffle(&usable);
        pos = 0;
      }
      const TimbreExample &ex = data[usable[pos++]];
      loss += model.AccumulateGradients(ex.mel, index[ex.speaker_id]);
    }
    loss /= B;
    if (!std::isfinite(loss)) EMO_ERR("timbre training diverged at step " << step);
    for (nnet::Param *p : params) p->grad /= B;
    adam.Step();
    if (loss_log) loss_log->push_back(loss);
    EMO_VLOG(2, "timbre step " << step << " loss " << loss);
  }
  return model;
}

void SaveTimbreModel(const TimbreModel &model, const Json &provenance,
                     const std::filesystem::path &path) {
  if (path.has_parent_path()) EnsureDirectory(path.parent_path());
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) EMO_ERR("cannot write " << path.string());
  model.Write(os);
  os.close();
  if (!os) EMO_ERR("failed writing " << path.string());
  Json side = provenance;
  side["kind"] = "timbre";
  side["config"] = model.Config().ToJson();
  side["speakers"] = model.Speakers();
  side["param_hash"] = model.Hash();
  WriteJsonFile(path.string() + ".json", side);
}

TimbreModel LoadTimbreModel(const std::filesystem::path &path, Json *sidecar) {
  std::ifstream is(path, std::ios::binary);
  if (!is) EMO_ERR("cannot open timbre model " << path.string());
  TimbreModel m;
  m.Read(is);
  if (sidecar) {
    *sidecar = ReadJsonFile(path.string() + ".json");
    if (sidecar->value("param_hash", "") != m.Hash())
      EMO_ERR("sidecar of " << path.string() << " does not match the parameter blob");
  }
  return m;
}

}  // namespace emoflow
