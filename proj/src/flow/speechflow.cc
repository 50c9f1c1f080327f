// src/flow/speechflow.cc

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

#include "emoflow/flow/speechflow.h"

#include <cmath>
#include <fstream>
#include <sstream>

#include "emoflow/base/error.h"
#include "emoflow/base/random.h"
#include "emoflow/feat/mel.h"

namespace emoflow {

namespace {

const char kFlowMagic[] = "EMOFLOW1";
enum Stream { kContent = 0, kRhythm = 1, kPitch = 2 };

int CodeRow(int t, int factor, Eigen::Index rows) {
  return static_cast<int>(std::min<Eigen::Index>(t / factor, rows - 1));
}

}  // namespace

// ------------------------------------------------------------- Config

double SpeechFlowConfig::BottleneckWidth() const {
  return static_cast<double>(d_c) / down_c + static_cast<double>(d_r) / down_r +
         static_cast<double>(d_f) / down_f;
}

void SpeechFlowConfig::Check() const {
  if (d_c < 1 || d_r < 1 || d_f < 1 || d_t < 1) EMO_ERR("latent widths must be positive");
  if (down_c < 1 || down_r < 1 || down_f < 1) EMO_ERR("downsampling factors must be positive");
  if (hidden_c < 1 || hidden_r < 1 || hidden_f < 1 || hidden_dec < 1)
    EMO_ERR("recurrent widths must be positive");
  if (!(BottleneckWidth() < kNumMelBins))
    EMO_ERR("information bottleneck violated: per-frame latent width " << BottleneckWidth()
            << " is not below " << kNumMelBins);
  if (batch_size < 1) EMO_ERR("batch size must be positive");
  if (num_steps < 0) EMO_ERR("number of steps must be non-negative");
  if (valid_every < 1) EMO_ERR("validation interval must be positive");
  rr.Check();
}

Json SpeechFlowConfig::ToJson() const {
  return {{"d_c", d_c},           {"d_r", d_r},
          {"d_f", d_f},           {"d_t", d_t},
          {"down_c", down_c},     {"down_r", down_r},
          {"down_f", down_f},     {"hidden_c", hidden_c},
          {"hidden_r", hidden_r}, {"hidden_f", hidden_f},
          {"hidden_dec", hidden_dec}, {"rr", rr.ToJson()},
          {"adam", adam.ToJson()}, {"batch_size", batch_size},
          {"num_steps", num_steps}, {"valid_every", valid_every},
          {"seed", seed}};
}

SpeechFlowConfig SpeechFlowConfig::FromJson(const Json &j) {
  SpeechFlowConfig c;
  c.d_c = j.at("d_c");
  c.d_r = j.at("d_r");
  c.d_f = j.at("d_f");
  c.d_t = j.at("d_t");
  c.down_c = j.at("down_c");
  c.down_r = j.at("down_r");
  c.down_f = j.at("down_f");
  c.hidden_c = j.at("hidden_c");
  c.hidden_r = j.at("hidden_r");
  c.hidden_f = j.at("hidden_f");
  c.hidden_dec = j.at("hidden_dec");
  const Json &rr = j.at("rr");
  c.rr.min_segment = rr.at("min_segment");
  c.rr.max_segment = rr.at("max_segment");
  c.rr.min_factor = rr.at("min_factor");
  c.rr.max_factor = rr.at("max_factor");
  const Json &a = j.at("adam");
  c.adam.learning_rate = a.at("learning_rate");
  c.adam.beta1 = a.at("beta1");
  c.adam.beta2 = a.at("beta2");
  c.adam.epsilon = a.at("epsilon");
  c.adam.clip_norm = a.at("clip_norm");
  c.batch_size = j.at("batch_size");
  c.num_steps = j.at("num_steps");
  c.valid_every = j.at("valid_every");
  c.seed = j.at("seed");
  return c;
}

ReconstructionError ReconstructionLoss(const Matrix &s, const Matrix &s_hat) {
  if (s.rows() != s_hat.rows() || s.cols() != s_hat.cols())
    EMO_ERR("reconstruction loss of " << s.rows() << "x" << s.cols() << " vs " << s_hat.rows()
            << "x" << s_hat.cols());
  ReconstructionError e;
  e.sum_squares = (s - s_hat).squaredNorm();
  e.mean = s.size() > 0 ? e.sum_squares / s.size() : 0.0;
  return e;
}

// -------------------------------------------------------------- Model

struct SpeechFlowModel::Cache {
  struct StreamCache {
    int frames = 0;
    nnet::BiLstm::Cache rnn;
    nnet::Linear::Cache proj;
    Matrix act;
  };
  StreamCache stream[3];
  nnet::BiLstm::Cache dec_rnn;
  nnet::Linear::Cache dec_proj;
};

SpeechFlowModel::SpeechFlowModel(const SpeechFlowConfig &config) : config_(config) {
  config.Check();
  Rng rng(DeriveSeed(config.seed, "speechflow-init"));
  const int M = kNumMelBins;
  rnn_c_ = nnet::BiLstm("enc_c.rnn", M, config.hidden_c, &rng);
  proj_c_ = nnet::Linear("enc_c.proj", 2 * config.hidden_c, config.d_c, &rng);
  rnn_r_ = nnet::BiLstm("enc_r.rnn", M, config.hidden_r, &rng);
  proj_r_ = nnet::Linear("enc_r.proj", 2 * config.hidden_r, config.d_r, &rng);
  rnn_f_ = nnet::BiLstm("enc_f.rnn", 2, config.hidden_f, &rng);
  proj_f_ = nnet::Linear("enc_f.proj", 2 * config.hidden_f, config.d_f, &rng);
  const int dec_in = config.d_c + config.d_r + config.d_f + config.d_t;
  rnn_dec_ = nnet::BiLstm("dec.rnn", dec_in, config.hidden_dec, &rng);
  proj_dec_ = nnet::Linear("dec.proj", 2 * config.hidden_dec, M, &rng);
}

nnet::ParamList SpeechFlowModel::Params() {
  nnet::ParamList p;
  rnn_c_.Params(&p);
  proj_c_.Params(&p);
  rnn_r_.Params(&p);
  proj_r_.Params(&p);
  rnn_f_.Params(&p);
  proj_f_.Params(&p);
  rnn_dec_.Params(&p);
  proj_dec_.Params(&p);
  return p;
}

void SpeechFlowModel::SetNormalization(double mean, double stddev) {
  if (!(stddev > 0.0) || !std::isfinite(mean)) EMO_ERR("bad mel normalization");
  norm_mean_ = mean;
  norm_std_ = stddev;
}

Matrix SpeechFlowModel::Normalize(const Matrix &mel) const {
  return ((mel.array() - norm_mean_) / norm_std_).matrix();
}

Matrix SpeechFlowModel::EncodeStream(int which, const Matrix &x, Cache *cache) const {
  const nnet::BiLstm *rnn[] = {&rnn_c_, &rnn_r_, &rnn_f_};
  const nnet::Linear *proj[] = {&proj_c_, &proj_r_, &proj_f_};
  const int down[] = {config_.down_c, config_.down_r, config_.down_f};
  Cache::StreamCache *sc = cache ? &cache->stream[which] : nullptr;
  Matrix h = rnn[which]->Forward(x, sc ? &sc->rnn : nullptr);
  Matrix a = nnet::Tanh(proj[which]->Forward(h, sc ? &sc->proj : nullptr));
  Matrix z = nnet::AvgPoolTime(a, down[which]);
  if (sc) {
    sc->frames = static_cast<int>(x.rows());
    sc->act = std::move(a);
  }
  return z;
}

LatentBundle SpeechFlowModel::Encode(const EncoderInputs &in, const Vector &z_t,
                                     const std::optional<ResampleSeeds> &rr) const {
  const int T = in.NumFrames();
  if (T <= 0) EMO_ERR("cannot encode an empty utterance");
  if (in.content.rows() != T || in.pitch.rows() != T)
    EMO_ERR("misaligned encoder inputs");
  if (in.content.cols() != kNumMelBins || in.rhythm.cols() != kNumMelBins || in.pitch.cols() != 2)
    EMO_ERR("encoder inputs must be T x " << kNumMelBins << " (mel) and T x 2 (pitch)");
  if (z_t.size() != config_.d_t)
    EMO_ERR("timbre vector has width " << z_t.size() << ", model expects " << config_.d_t);
  Matrix xc = Normalize(in.content), xf = in.pitch;
  if (rr) {
    xc = RandomResample(xc, rr->content, config_.rr);
    xf = RandomResample(xf, rr->pitch, config_.rr);
  }
  LatentBundle b;
  b.z_c = EncodeStream(kContent, xc, nullptr);
  b.z_r = EncodeStream(kRhythm, Normalize(in.rhythm), nullptr);
  b.z_f = EncodeStream(kPitch, xf, nullptr);
  b.z_t = z_t;
  return b;
}

Matrix SpeechFlowModel::DecoderInput(const LatentBundle &b, int T) const {
  if (T <= 0) EMO_ERR("decode target length must be positive, got " << T);
  if (b.z_c.cols() != config_.d_c || b.z_r.cols() != config_.d_r || b.z_f.cols() != config_.d_f ||
      b.z_t.size() != config_.d_t || b.z_c.rows() == 0 || b.z_r.rows() == 0 || b.z_f.rows() == 0)
    EMO_ERR("latent bundle does not match the model configuration");
  const int dc = config_.d_c, dr = config_.d_r, df = config_.d_f;
  Matrix x(T, dc + dr + df + config_.d_t);
  for (int t = 0; t < T; ++t) {
    x.block(t, 0, 1, dc) = b.z_c.row(CodeRow(t, config_.down_c, b.z_c.rows()));
    x.block(t, dc, 1, dr) = b.z_r.row(CodeRow(t, config_.down_r, b.z_r.rows()));
    x.block(t, dc + dr, 1, df) = b.z_f.row(CodeRow(t, config_.down_f, b.z_f.rows()));
    x.block(t, dc + dr + df, 1, config_.d_t) = b.z_t.transpose();
  }
  return x;
}

Matrix SpeechFlowModel::Decode(const LatentBundle &bundle, int target_length) const {
  Matrix y = proj_dec_.Forward(rnn_dec_.Forward(DecoderInput(bundle, target_length)));
  return ((y.array() * norm_std_) + norm_mean_).matrix();
}

Matrix SpeechFlowModel::Reconstruct(const EncoderInputs &in, const Vector &z_t) const {
  return Decode(Encode(in, z_t), in.NumFrames());
}

double SpeechFlowModel::AccumulateGradients(const FlowExample &ex,
                                            const std::optional<ResampleSeeds> &rr) {
  const EncoderInputs &in = ex.inputs;
  const int T = in.NumFrames();
  if (T <= 0) EMO_ERR("empty training example " << ex.id);
  if (ex.z_t.size() != config_.d_t) EMO_ERR("timbre width mismatch for " << ex.id);
  Cache cache;
  const Matrix target = Normalize(in.rhythm);
  Matrix xc = target, xf = in.pitch;
  if (rr) {
    xc = RandomResample(xc, rr->content, config_.rr);
    xf = RandomResample(xf, rr->pitch, config_.rr);
  }
  LatentBundle b;
  b.z_c = EncodeStream(kContent, xc, &cache);
  b.z_r = EncodeStream(kRhythm, target, &cache);
  b.z_f = EncodeStream(kPitch, xf, &cache);
  b.z_t = ex.z_t;
  Matrix dec_in = DecoderInput(b, T);
  Matrix y = proj_dec_.Forward(rnn_dec_.Forward(dec_in, &cache.dec_rnn), &cache.dec_proj);
  Matrix diff = y - target;
  const double n = static_cast<double>(diff.size());
  const double loss = diff.squaredNorm() / n;

  Matrix dx = rnn_dec_.Backward(cache.dec_rnn, proj_dec_.Backward(cache.dec_proj, diff * (2.0 / n)));
  const int dc = config_.d_c, dr = config_.d_r, df = config_.d_f;
  Matrix dzc = Matrix::Zero(b.z_c.rows(), dc), dzr = Matrix::Zero(b.z_r.rows(), dr),
         dzf = Matrix::Zero(b.z_f.rows(), df);
  for (int t = 0; t < T; ++t) {
    dzc.row(CodeRow(t, config_.down_c, b.z_c.rows())) += dx.block(t, 0, 1, dc);
    dzr.row(CodeRow(t, config_.down_r, b.z_r.rows())) += dx.block(t, dc, 1, dr);
    dzf.row(CodeRow(t, config_.down_f, b.z_f.rows())) += dx.block(t, dc + dr, 1, df);
  }
  nnet::BiLstm *rnn[] = {&rnn_c_, &rnn_r_, &rnn_f_};
  nnet::Linear *proj[] = {&proj_c_, &proj_r_, &proj_f_};
  const int down[] = {config_.down_c, config_.down_r, config_.down_f};
  const Matrix *dz[] = {&dzc, &dzr, &dzf};
  for (int s = 0; s < 3; ++s) {
    Cache::StreamCache &sc = cache.stream[s];
    Matrix da = nnet::AvgPoolTimeBackward(*dz[s], sc.frames, down[s]);
    Matrix dh = proj[s]->Backward(sc.proj, nnet::TanhBackward(sc.act, da));
    rnn[s]->Backward(sc.rnn, dh);
  }
  return loss;
}

void SpeechFlowModel::Write(std::ostream &os) const {
  os.write(kFlowMagic, 8);
  WriteString(os, config_.ToJson().dump());
  WriteDoubles(os, {norm_mean_, norm_std_});
  nnet::WriteParams(os, const_cast<SpeechFlowModel *>(this)->Params());
}

void SpeechFlowModel::Read(std::istream &is) {
  char magic[8];
  is.read(magic, 8);
  if (!is || std::string(magic, 8) != kFlowMagic) EMO_ERR("not a SpeechFlow model blob");
  SpeechFlowConfig config = SpeechFlowConfig::FromJson(Json::parse(ReadString(is)));
  std::vector<double> norm = ReadDoubles(is);
  if (norm.size() != 2) EMO_ERR("corrupt SpeechFlow normalization block");
  *this = SpeechFlowModel(config);
  norm_mean_ = norm[0];
  norm_std_ = norm[1];
  nnet::ReadParams(is, Params());
}

std::string SpeechFlowModel::Hash() const {
  std::ostringstream os;
  Write(os);
  return HashHex(os.str());
}

// ----------------------------------------------------------- Training

namespace {

double MelMean(const std::vector<FlowExample> &data, double *stddev) {
  double sum = 0.0, sum2 = 0.0, n = 0.0;
  for (const auto &ex : data) {
    sum += ex.inputs.rhythm.sum();
    sum2 += ex.inputs.rhythm.squaredNorm();
    n += static_cast<double>(ex.inputs.rhythm.size());
  }
  double mean = sum / n;
  *stddev = std::sqrt(std::max(sum2 / n - mean * mean, 1e-12));
  return mean;
}

}  // namespace

double EvaluateSpeechFlow(const SpeechFlowModel &model, const std::vector<FlowExample> &data,
                          const FactorMask &mask) {
  if (data.empty()) EMO_ERR("evaluation on an empty set");
  double total = 0.0;
  for (const auto &ex : data) {
    Matrix y = model.Reconstruct(MaskInputs(ex.inputs, mask), ex.z_t);
    total += ReconstructionLoss(ex.inputs.rhythm, y).mean / (model.NormStd() * model.NormStd());
  }
  return total / data.size();
}

SpeechFlowModel TrainSpeechFlow(const std::vector<FlowExample> &train,
                                const std::vector<FlowExample> &valid,
                                const SpeechFlowConfig &config, FlowTrainLog *log,
                                const StepCallback &on_step) {
  if (train.empty()) EMO_ERR("no SpeechFlow training data");
  SpeechFlowModel model(config);
  double sd = 1.0;
  double mean = MelMean(train, &sd);
  model.SetNormalization(mean, sd);
  nnet::ParamList params = model.Params();
  nnet::Adam adam(params, config.adam);
  Rng order_rng(DeriveSeed(config.seed, "speechflow-order"));
  std::vector<int> order(train.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  size_t pos = order.size();
  FlowTrainLog local;
  FlowTrainLog &lg = log ? *log : local;
  lg = FlowTrainLog();
  std::vector<Matrix> best;
  double best_loss = std::numeric_limits<double>::infinity();
  const int B = std::min<int>(config.batch_size, static_cast<int>(train.size()));

  for (int step = 1; step <= config.num_steps; ++step) {
    double loss = 0.0;
    for (int k = 0; k < B; ++k) {
      if (pos == order.size()) {
        order_rng.Shuffle(&order);
        pos = 0;
      }
      const FlowExample &ex = train[order[pos++]];
      const std::string tag = std::to_string(step) + "/" + std::to_string(k);
      ResampleSeeds seeds{DeriveSeed(config.seed, "rr-content/" + tag),
                          DeriveSeed(config.seed, "rr-pitch/" + tag)};
      loss += model.AccumulateGradients(ex, seeds);
    }
    loss /= B;
    if (!std::isfinite(loss))
      EMO_ERR("SpeechFlow training diverged at step " << step << " (loss " << loss
              << "; previous " << (lg.train_loss.empty() ? 0.0 : lg.train_loss.back()) << ")");
    for (nnet::Param *p : params) p->grad /= B;
    adam.Step();
    lg.train_loss.push_back(loss);
    if (on_step) on_step(step, loss);
    if (!valid.empty() && (step % config.valid_every == 0 || step == config.num_steps)) {
      double v = EvaluateSpeechFlow(model, valid);
      lg.valid_loss.emplace_back(step, v);
      EMO_VLOG(1, "speechflow step " << step << " train " << loss << " valid " << v);
      if (v < best_loss) {
        best_loss = v;
        lg.best_step = step;
        best.clear();
        for (const nnet::Param *p : params) best.push_back(p->value);
      }
    }
  }
  if (!best.empty()) {
    for (size_t k = 0; k < params.size(); ++k) params[k]->value = best[k];
    lg.best_valid_loss = best_loss;
  } else {
    lg.best_step = config.num_steps;
    lg.best_valid_loss = valid.empty() ? 0.0 : EvaluateSpeechFlow(model, valid);
  }
  return model;
}

ReconstructedCorpus ReconstructCorpus(const std::vector<FlowExample> &data,
                                      const FactorMask &mask, const SpeechFlowModel &model) {
  ReconstructedCorpus out;
  out.mask_tag = mask.Tag();
  out.model_hash = model.Hash();
  std::string missing;
  for (const auto &ex : data)
    if (ex.inputs.NumFrames() == 0) missing += (missing.empty() ? "" : ", ") + ex.id;
  if (!missing.empty()) EMO_ERR("missing features for utterances: " << missing);
  for (const auto &ex : data)
    out.mels[ex.id] = model.Reconstruct(MaskInputs(ex.inputs, mask), ex.z_t);
  return out;
}

FidelityReport MeasureFidelity(const SpeechFlowModel &model, const std::vector<FlowExample> &data) {
  if (data.empty()) EMO_ERR("fidelity of an empty set");
  RowVector mean_frame = RowVector::Zero(kNumMelBins);
  double frames = 0.0;
  for (const auto &ex : data) {
    mean_frame += ex.inputs.rhythm.colwise().sum();
    frames += ex.inputs.rhythm.rows();
  }
  mean_frame /= frames;
  FidelityReport r;
  double entries = frames * kNumMelBins;
  for (const auto &ex : data) {
    const Matrix &s = ex.inputs.rhythm;
    r.mean_frame_mse += (s.rowwise() - mean_frame).squaredNorm();
    r.model_mse += ReconstructionLoss(s, model.Reconstruct(ex.inputs, ex.z_t)).sum_squares;
  }
  r.mean_frame_mse /= entries;
  r.model_mse /= entries;
  return r;
}

void SaveSpeechFlow(const SpeechFlowModel &model, const Json &provenance,
                    const std::filesystem::path &path) {
  if (path.has_parent_path()) EnsureDirectory(path.parent_path());
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) EMO_ERR("cannot write " << path.string());
  model.Write(os);
  os.close();
  if (!os) EMO_ERR("failed writing " << path.string());
  Json side = provenance;
  side["kind"] = "speechflow";
  side["config"] = model.Config().ToJson();
  side["seed"] = model.Config().seed;
  side["param_hash"] = model.Hash();
  WriteJsonFile(path.string() + ".json", side);
}

SpeechFlowModel LoadSpeechFlow(const std::filesystem::path &path, Json *sidecar) {
  std::ifstream is(path, std::ios::binary);
  if (!is) EMO_ERR("cannot open SpeechFlow model " << path.string());
  SpeechFlowModel m;
  m.Read(is);
  if (sidecar) {
    *sidecar = ReadJsonFile(path.string() + ".json");
    if (sidecar->value("param_hash", "") != m.Hash())
      EMO_ERR("sidecar of " << path.string() << " does not match the parameter blob");
  }
  return m;
}

}  // namespace emoflow
