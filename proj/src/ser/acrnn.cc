// src/ser/acrnn.cc

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

#include "emoflow/ser/acrnn.h"

#include <cmath>
#include <fstream>
#include <sstream>

#include "emoflow/base/error.h"
#include "emoflow/base/random.h"
#include "emoflow/eval/metrics.h"
#include "emoflow/ingest/manifest.h"

namespace emoflow {

namespace {
const char kAcrnnMagic[] = "EMOACRN1";
}

Json AcrnnConfig::ToJson() const {
  return {{"num_bins", num_bins},
          {"conv1_channels", conv1_channels},
          {"conv_channels", conv_channels},
          {"num_conv_layers", num_conv_layers},
          {"kernel_t", kernel_t},
          {"kernel_f", kernel_f},
          {"pool_t", pool_t},
          {"pool_f", pool_f},
          {"fc_dim", fc_dim},
          {"rnn_hidden", rnn_hidden},
          {"att_dim", att_dim},
          {"leaky_slope", leaky_slope},
          {"num_steps", num_steps},
          {"batch_size", batch_size},
          {"valid_every", valid_every},
          {"patience", patience},
          {"adam", adam.ToJson()},
          {"class_weights", class_weights},
          {"seed", seed}};
}

AcrnnConfig AcrnnConfig::FromJson(const Json &j) {
  AcrnnConfig c;
  c.num_bins = j.at("num_bins");
  c.conv1_channels = j.at("conv1_channels");
  c.conv_channels = j.at("conv_channels");
  c.num_conv_layers = j.at("num_conv_layers");
  c.kernel_t = j.at("kernel_t");
  c.kernel_f = j.at("kernel_f");
  c.pool_t = j.at("pool_t");
  c.pool_f = j.at("pool_f");
  c.fc_dim = j.at("fc_dim");
  c.rnn_hidden = j.at("rnn_hidden");
  c.att_dim = j.at("att_dim");
  c.leaky_slope = j.at("leaky_slope");
  c.num_steps = j.at("num_steps");
  c.batch_size = j.at("batch_size");
  c.valid_every = j.at("valid_every");
  c.patience = j.at("patience");
  const Json &a = j.at("adam");
  c.adam.learning_rate = a.at("learning_rate");
  c.adam.beta1 = a.at("beta1");
  c.adam.beta2 = a.at("beta2");
  c.adam.epsilon = a.at("epsilon");
  c.adam.clip_norm = a.at("clip_norm");
  c.class_weights = j.at("class_weights");
  c.seed = j.at("seed");
  return c;
}

void AcrnnConfig::Check() const {
  if (num_bins < 1 || conv1_channels < 1 || conv_channels < 1 || num_conv_layers < 0 ||
      fc_dim < 1 || rnn_hidden < 1 || att_dim < 1)
    EMO_ERR("ACRNN widths must be positive");
  if (kernel_t % 2 == 0 || kernel_f % 2 == 0) EMO_ERR("ACRNN kernels must have odd sizes");
  if (pool_t < 1 || pool_f < 1 || num_bins / pool_f < 1) EMO_ERR("bad ACRNN pooling");
  if (batch_size < 1 || num_steps < 0 || valid_every < 1 || patience < 0)
    EMO_ERR("bad ACRNN training schedule");
}

AcrnnInput MakeAcrnnInput(const Matrix &mel) {
  const int T = static_cast<int>(mel.rows()), F = static_cast<int>(mel.cols());
  if (T < 3) EMO_ERR("ACRNN input needs at least 3 frames, got " << T);
  Matrix d1(T, F), d2(T, F);
  d1.topRows(T - 1) = mel.bottomRows(T - 1) - mel.topRows(T - 1);
  d1.row(T - 1) = d1.row(T - 2);
  d2.topRows(T - 1) = d1.bottomRows(T - 1) - d1.topRows(T - 1);
  d2.row(T - 1) = d2.row(T - 2);
  AcrnnInput x;
  x.image.height = T;
  x.image.width = F;
  x.image.data.resize(static_cast<Eigen::Index>(T) * F, 3);
  for (int t = 0; t < T; ++t)
    for (int f = 0; f < F; ++f) {
      const Eigen::Index r = static_cast<Eigen::Index>(t) * F + f;
      x.image.data(r, 0) = mel(t, f);
      x.image.data(r, 1) = d1(t, f);
      x.image.data(r, 2) = d2(t, f);
    }
  return x;
}

int ArgmaxLowest(const Vector &v) {
  if (v.size() == 0) EMO_ERR("argmax of an empty vector");
  int best = 0;
  for (int k = 1; k < v.size(); ++k)
    if (v(k) > v(best)) best = k;
  return best;
}

int EmotionPosterior::Predicted() const { return ArgmaxLowest(probs); }

struct AcrnnModel::Cache {
  nnet::Image input;
  nnet::Conv2d::Cache conv1;
  Matrix conv1_pre;
  nnet::MaxPool2d::Cache pool;
  std::vector<nnet::Conv2d::Cache> convs;
  std::vector<Matrix> conv_pre;
  int height = 0, width = 0, channels = 0;
  nnet::Linear::Cache fc;
  Matrix fc_pre;
  nnet::BiLstm::Cache rnn;
  nnet::AttentionPool::Cache att;
  nnet::Linear::Cache out;
};

AcrnnModel::AcrnnModel(const AcrnnConfig &config, const std::string &mask_tag)
    : config_(config), mask_tag_(mask_tag) {
  config.Check();
  Rng rng(DeriveSeed(config.seed, "acrnn-init"));
  conv1_ = nnet::Conv2d("acrnn.conv1", 3, config.conv1_channels, config.kernel_t, config.kernel_f, &rng);
  pool_ = nnet::MaxPool2d(config.pool_t, config.pool_f);
  int cin = config.conv1_channels;
  for (int l = 0; l < config.num_conv_layers; ++l) {
    convs_.emplace_back("acrnn.conv" + std::to_string(l + 2), cin, config.conv_channels,
                        config.kernel_t, config.kernel_f, &rng);
    cin = config.conv_channels;
  }
  const int width = config.num_bins / config.pool_f;
  fc_ = nnet::Linear("acrnn.fc", width * cin, config.fc_dim, &rng);
  rnn_ = nnet::BiLstm("acrnn.rnn", config.fc_dim, config.rnn_hidden, &rng);
  att_ = nnet::AttentionPool("acrnn.att", 2 * config.rnn_hidden, config.att_dim, &rng);
  out_ = nnet::Linear("acrnn.out", 2 * config.rnn_hidden, kNumEmotions, &rng);
}

nnet::ParamList AcrnnModel::Params() {
  nnet::ParamList p;
  conv1_.Params(&p);
  for (auto &c : convs_) c.Params(&p);
  fc_.Params(&p);
  rnn_.Params(&p);
  att_.Params(&p);
  out_.Params(&p);
  return p;
}

void AcrnnModel::SetNormalization(const std::vector<double> &mean,
                                  const std::vector<double> &stddev) {
  if (mean.size() != 3 || stddev.size() != 3) EMO_ERR("ACRNN normalization needs 3 channels");
  for (double s : stddev)
    if (!(s > 0.0)) EMO_ERR("ACRNN normalization std must be positive");
  norm_mean_ = mean;
  norm_std_ = stddev;
}

Matrix AcrnnModel::Frames(const AcrnnInput &x, Cache *cache) const {
  if (x.image.width != config_.num_bins || x.image.Channels() != 3)
    EMO_ERR("ACRNN input must be T x " << config_.num_bins << " x 3, got T x " << x.image.width
            << " x " << x.image.Channels());
  if (x.image.height < config_.pool_t)
    EMO_ERR("ACRNN input of " << x.image.height << " frames is shorter than the pooling window");
  const double s = config_.leaky_slope;
  nnet::Image img = x.image;
  for (int c = 0; c < 3; ++c)
    img.data.col(c) = ((img.data.col(c).array() - norm_mean_[c]) / norm_std_[c]).matrix();
  nnet::Image h = conv1_.Forward(img, cache ? &cache->conv1 : nullptr);
  if (cache) cache->conv1_pre = h.data;
  h.data = nnet::LeakyRelu(h.data, s);
  h = pool_.Forward(h, cache ? &cache->pool : nullptr);
  if (cache) {
    cache->convs.assign(convs_.size(), {});
    cache->conv_pre.assign(convs_.size(), {});
  }
  for (size_t l = 0; l < convs_.size(); ++l) {
    h = convs_[l].Forward(h, cache ? &cache->convs[l] : nullptr);
    if (cache) cache->conv_pre[l] = h.data;
    h.data = nnet::LeakyRelu(h.data, s);
  }
  const int C = h.Channels();
  Matrix frames = Eigen::Map<const Matrix>(h.data.data(), h.height, static_cast<Eigen::Index>(h.width) * C);
  Matrix pre = fc_.Forward(frames, cache ? &cache->fc : nullptr);
  if (cache) {
    cache->height = h.height;
    cache->width = h.width;
    cache->channels = C;
    cache->fc_pre = pre;
  }
  return nnet::LeakyRelu(pre, s);
}

Matrix AcrnnModel::PooledVector(const AcrnnInput &x, Vector *alpha, Matrix *frames) const {
  Matrix r = rnn_.Forward(Frames(x, nullptr));
  if (frames) *frames = r;
  return att_.Forward(r, nullptr, alpha);
}

EmotionPosterior AcrnnModel::Forward(const AcrnnInput &x) const {
  EmotionPosterior p;
  Matrix pooled = PooledVector(x, &p.attention, nullptr);
  Matrix logits = out_.Forward(pooled);
  p.probs = nnet::Softmax(logits.row(0).transpose());
  return p;
}

double AcrnnModel::AccumulateGradients(const AcrnnInput &x, int label, double weight) {
  Cache cache;
  const double s = config_.leaky_slope;
  Matrix f = Frames(x, &cache);
  Matrix r = rnn_.Forward(f, &cache.rnn);
  Matrix pooled = att_.Forward(r, &cache.att);
  Matrix logits = out_.Forward(pooled, &cache.out);
  Vector dlogits;
  double loss = weight * nnet::SoftmaxCrossEntropy(logits.row(0).transpose(), label, &dlogits);
  dlogits *= weight;
  Matrix dpooled = out_.Backward(cache.out, dlogits.transpose());
  Matrix dr = att_.Backward(cache.att, dpooled);
  Matrix df = rnn_.Backward(cache.rnn, dr);
  Matrix dframes = fc_.Backward(cache.fc, nnet::LeakyReluBackward(cache.fc_pre, df, s));
  nnet::Image dh;
  dh.height = cache.height;
  dh.width = cache.width;
  dh.data = Eigen::Map<const Matrix>(dframes.data(), static_cast<Eigen::Index>(cache.height) * cache.width,
                                     cache.channels);
  for (int l = static_cast<int>(convs_.size()) - 1; l >= 0; --l) {
    dh.data = nnet::LeakyReluBackward(cache.conv_pre[l], dh.data, s);
    dh = convs_[l].Backward(cache.convs[l], dh);
  }
  dh = pool_.Backward(cache.pool, dh);
  dh.data = nnet::LeakyReluBackward(cache.conv1_pre, dh.data, s);
  conv1_.Backward(cache.conv1, dh);
  return loss;
}

void AcrnnModel::Write(std::ostream &os) const {
  os.write(kAcrnnMagic, 8);
  WriteString(os, config_.ToJson().dump());
  WriteString(os, mask_tag_);
  WriteDoubles(os, norm_mean_);
  WriteDoubles(os, norm_std_);
  nnet::WriteParams(os, const_cast<AcrnnModel *>(this)->Params());
}

void AcrnnModel::Read(std::istream &is) {
  char magic[8];
  is.read(magic, 8);
  if (!is || std::string(magic, 8) != kAcrnnMagic) EMO_ERR("not an ACRNN model blob");
  AcrnnConfig config = AcrnnConfig::FromJson(Json::parse(ReadString(is)));
  std::string tag = ReadString(is);
  std::vector<double> mean = ReadDoubles(is), sd = ReadDoubles(is);
  *this = AcrnnModel(config, tag);
  SetNormalization(mean, sd);
  nnet::ReadParams(is, Params());
}

std::string AcrnnModel::Hash() const {
  std::ostringstream os;
  Write(os);
  return HashHex(os.str());
}

namespace {

void CheckTags(const std::vector<SerExample> &data, const std::string &tag, const char *what) {
  for (const auto &ex : data)
    if (ex.mask_tag != tag)
      EMO_ERR(what << " example " << ex.id << " has mask tag '" << ex.mask_tag
              << "' but the dataset is tagged '" << tag << "'; refusing to mix factor configurations");
}

double ValidationUar(const AcrnnModel &model, const std::vector<AcrnnInput> &inputs,
                     const std::vector<SerExample> &data) {
  std::vector<int> preds, labels;
  for (size_t i = 0; i < inputs.size(); ++i) {
    preds.push_back(model.Forward(inputs[i]).Predicted());
    labels.push_back(data[i].label);
  }
  return Uar(preds, labels);
}

}  // namespace

AcrnnModel TrainAcrnn(const std::vector<SerExample> &train, const std::vector<SerExample> &valid,
                      const AcrnnConfig &config, const std::string &mask_tag, AcrnnTrainLog *log) {
  if (train.empty()) EMO_ERR("no ACRNN training data");
  CheckTags(train, mask_tag, "training");
  CheckTags(valid, mask_tag, "validation");
  AcrnnModel model(config, mask_tag);
  std::vector<AcrnnInput> tr, va;
  for (const auto &ex : train) tr.push_back(MakeAcrnnInput(ex.mel));
  for (const auto &ex : valid) va.push_back(MakeAcrnnInput(ex.mel));

  std::vector<double> mean(3, 0.0), sd(3, 0.0);
  double n = 0.0;
  for (const auto &x : tr) {
    for (int c = 0; c < 3; ++c) {
      mean[c] += x.image.data.col(c).sum();
      sd[c] += x.image.data.col(c).squaredNorm();
    }
    n += static_cast<double>(x.image.data.rows());
  }
  for (int c = 0; c < 3; ++c) {
    mean[c] /= n;
    sd[c] = std::sqrt(std::max(sd[c] / n - mean[c] * mean[c], 1e-12));
  }
  model.SetNormalization(mean, sd);

  std::vector<double> class_weight(kNumEmotions, 1.0);
  if (config.class_weights) {
    std::vector<double> counts(kNumEmotions, 0.0);
    for (const auto &ex : train) counts[ex.label] += 1.0;
    int present = 0;
    for (double c : counts) present += c > 0;
    for (int k = 0; k < kNumEmotions; ++k)
      class_weight[k] = counts[k] > 0 ? train.size() / (present * counts[k]) : 0.0;
  }

  nnet::ParamList params = model.Params();
  nnet::Adam adam(params, config.adam);
  Rng rng(DeriveSeed(config.seed, "acrnn-order"));
  std::vector<int> order(train.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  size_t pos = order.size();
  AcrnnTrainLog local;
  AcrnnTrainLog &lg = log ? *log : local;
  lg = AcrnnTrainLog();
  std::vector<Matrix> best;
  double best_uar = -1.0;
  int since_best = 0;
  const int B = std::min<int>(config.batch_size, static_cast<int>(train.size()));
  for (int step = 1; step <= config.num_steps; ++step) {
    double loss = 0.0;
    for (int k = 0; k < B; ++k) {
      if (pos == order.size()) {
        rng.Shuffle(&order);
        pos = 0;
      }
      const int i = order[pos++];
      loss += model.AccumulateGradients(tr[i], train[i].label, class_weight[train[i].label]);
    }
    loss /= B;
    if (!std::isfinite(loss)) EMO_ERR("ACRNN training diverged at step " << step);
    for (nnet::Param *p : params) p->grad /= B;
    adam.Step();
    lg.train_loss.push_back(loss);
    lg.steps_run = step;
    if (!va.empty() && (step % config.valid_every == 0 || step == config.num_steps)) {
      double uar = ValidationUar(model, va, valid);
      lg.valid_uar.emplace_back(step, uar);
      EMO_VLOG(1, "acrnn[" << mask_tag << "] step " << step << " loss " << loss << " valid UAR "
               << uar);
      if (uar > best_uar) {
        best_uar = uar;
        lg.best_step = step;
        since_best = 0;
        best.clear();
        for (const nnet::Param *p : params) best.push_back(p->value);
      } else if (config.patience > 0 && ++since_best >= config.patience) {
        break;
      }
    }
  }
  if (!best.empty()) {
    for (size_t k = 0; k < params.size(); ++k) params[k]->value = best[k];
    lg.best_valid_uar = best_uar;
  } else {
    lg.best_step = lg.steps_run;
    lg.best_valid_uar = va.empty() ? 0.0 : ValidationUar(model, va, valid);
  }
  return model;
}

std::vector<int> PredictAcrnn(const AcrnnModel &model, const std::vector<SerExample> &data) {
  std::vector<int> preds;
  preds.reserve(data.size());
  for (const auto &ex : data) {
    if (ex.mask_tag != model.MaskTag())
      EMO_ERR("example " << ex.id << " is tagged '" << ex.mask_tag << "' but the model was trained on '"
              << model.MaskTag() << "'");
    preds.push_back(model.Forward(MakeAcrnnInput(ex.mel)).Predicted());
  }
  return preds;
}

void SaveAcrnn(const AcrnnModel &model, const Json &provenance, const std::filesystem::path &path) {
  if (path.has_parent_path()) EnsureDirectory(path.parent_path());
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) EMO_ERR("cannot write " << path.string());
  model.Write(os);
  os.close();
  if (!os) EMO_ERR("failed writing " << path.string());
  Json side = provenance;
  side["kind"] = "acrnn";
  side["config"] = model.Config().ToJson();
  side["seed"] = model.Config().seed;
  side["mask_tag"] = model.MaskTag();
  side["param_hash"] = model.Hash();
  WriteJsonFile(path.string() + ".json", side);
}

AcrnnModel LoadAcrnn(const std::filesystem::path &path, Json *sidecar) {
  std::ifstream is(path, std::ios::binary);
  if (!is) EMO_ERR("cannot open ACRNN model " << path.string());
  AcrnnModel m;
  m.Read(is);
  if (sidecar) {
    *sidecar = ReadJsonFile(path.string() + ".json");
    if (sidecar->value("param_hash", "") != m.Hash())
      EMO_ERR("sidecar of " << path.string() << " does not match the parameter blob");
    if (sidecar->value("mask_tag", "") != m.MaskTag())
      EMO_ERR("mask tag of " << path.string() << " disagrees with its sidecar");
  }
  return m;
}

}  // namespace emoflow
