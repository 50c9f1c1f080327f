// tests/unit/flow-test.cc

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

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <sstream>

#include "emoflow/base/error.h"
#include "emoflow/base/random.h"
#include "emoflow/flow/factor-mask.h"
#include "emoflow/flow/speechflow.h"

namespace emoflow {
namespace {

Matrix RandomMatrix(int r, int c, Rng *rng, double lo, double hi) {
  Matrix m(r, c);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = rng->Uniform(lo, hi);
  return m;
}

EncoderInputs RandomInputs(int T, Rng *rng) {
  EncoderInputs in;
  in.rhythm = RandomMatrix(T, kNumMelBins, rng, -6.0, 2.0);
  in.content = in.rhythm;
  in.pitch = Matrix(T, 2);
  for (int t = 0; t < T; ++t) {
    in.pitch(t, 0) = rng->Normal();
    in.pitch(t, 1) = 1.0;
  }
  return in;
}

Vector RandomTimbre(int d, Rng *rng) {
  Vector v(d);
  for (int i = 0; i < d; ++i) v(i) = rng->Normal();
  return v / v.norm();
}

SpeechFlowConfig MiniConfig() {
  SpeechFlowConfig c;
  c.d_c = 2;
  c.d_r = 1;
  c.d_f = 2;
  c.d_t = 3;
  c.down_c = c.down_r = c.down_f = 2;
  c.hidden_c = 2;
  c.hidden_r = 2;
  c.hidden_f = 2;
  c.hidden_dec = 3;
  c.seed = 3;
  return c;
}

TEST(FactorMaskTest, TagsRoundTrip) {
  for (int bits = 0; bits < 8; ++bits) {
    FactorMask m{(bits & 4) != 0, (bits & 2) != 0, (bits & 1) != 0};
    EXPECT_EQ(FactorMask::FromTag(m.Tag()), m);
  }
  EXPECT_EQ(FactorMask::All().Tag(), "CRP");
  EXPECT_EQ(FactorMask::None().Tag(), "---");
  EXPECT_EQ(FactorMask::FromTag("-r-"), (FactorMask{false, true, false}));
  EXPECT_THROW(FactorMask::FromTag("CR"), UsageError);
  EXPECT_THROW(FactorMask::FromTag("RCP"), UsageError);
  EXPECT_THROW(FactorMask::FromTag("CRX"), UsageError);
}

TEST(FactorMaskTest, FullMaskIsIdentityAndMaskingIsIdempotent) {
  Rng rng(1);
  EncoderInputs in = RandomInputs(20, &rng);
  EncoderInputs full = MaskInputs(in, FactorMask::All());
  EXPECT_EQ(full.content, in.content);
  EXPECT_EQ(full.rhythm, in.rhythm);
  EXPECT_EQ(full.pitch, in.pitch);
  for (int bits = 0; bits < 8; ++bits) {
    FactorMask m{(bits & 4) != 0, (bits & 2) != 0, (bits & 1) != 0};
    EncoderInputs once = MaskInputs(in, m), twice = MaskInputs(once, m);
    EXPECT_EQ(once.content, twice.content);
    EXPECT_EQ(once.rhythm, twice.rhythm);
    EXPECT_EQ(once.pitch, twice.pitch);
    EXPECT_EQ(once.rhythm.rows(), 20);
  }
}

TEST(FactorMaskTest, RhythmOnlyZeroesContentAndPitch) {
  Rng rng(2);
  EncoderInputs in = RandomInputs(12, &rng);
  EncoderInputs m = MaskInputs(in, FactorMask::FromTag("-R-"));
  EXPECT_EQ(m.content, Matrix::Zero(12, kNumMelBins));
  EXPECT_EQ(m.pitch, Matrix::Zero(12, 2));
  EXPECT_EQ(m.rhythm, in.rhythm);
}

TEST(SpeechFlowTest, ReconstructionLossValues) {
  Matrix s = Matrix::Zero(2, 2), t = Matrix::Constant(2, 2, 1.0);
  ReconstructionError e = ReconstructionLoss(s, t);
  EXPECT_DOUBLE_EQ(e.sum_squares, 4.0);
  EXPECT_DOUBLE_EQ(e.mean, 1.0);
  EXPECT_DOUBLE_EQ(ReconstructionLoss(s, s).sum_squares, 0.0);
  EXPECT_THROW(ReconstructionLoss(s, Matrix::Zero(2, 3)), Error);
}

TEST(SpeechFlowTest, LatentShapes) {
  SpeechFlowConfig c;
  c.seed = 1;
  SpeechFlowModel model(c);
  Rng rng(4);
  EncoderInputs in = RandomInputs(128, &rng);
  LatentBundle b = model.Encode(in, RandomTimbre(c.d_t, &rng));
  EXPECT_EQ(b.z_c.rows(), 16);
  EXPECT_EQ(b.z_c.cols(), c.d_c);
  EXPECT_EQ(b.z_r.rows(), 16);
  EXPECT_EQ(b.z_r.cols(), c.d_r);
  EXPECT_EQ(b.z_f.rows(), 16);
  EXPECT_EQ(b.z_f.cols(), c.d_f);
  EXPECT_EQ(model.Decode(b, 128).rows(), 128);
  EXPECT_EQ(model.Decode(b, 128).cols(), kNumMelBins);
  // A partial trailing group still produces a code row.
  EXPECT_EQ(model.Encode(RandomInputs(122, &rng), RandomTimbre(c.d_t, &rng)).z_c.rows(), 16);
}

TEST(SpeechFlowTest, ConfigRejectsWideBottleneck) {
  SpeechFlowConfig c;
  c.d_f = 640;
  EXPECT_THROW(c.Check(), Error);
  EXPECT_THROW(SpeechFlowModel m(c), Error);
  EXPECT_LT(SpeechFlowConfig().BottleneckWidth(), kNumMelBins);
}

TEST(SpeechFlowTest, RejectsMismatchedInputs) {
  SpeechFlowModel model(MiniConfig());
  Rng rng(5);
  EncoderInputs in = RandomInputs(10, &rng);
  EXPECT_THROW(model.Encode(in, RandomTimbre(4, &rng)), Error);
  in.pitch = Matrix::Zero(9, 2);
  EXPECT_THROW(model.Encode(in, RandomTimbre(3, &rng)), Error);
}

TEST(SpeechFlowTest, GradientsMatchFiniteDifferences) {
  SpeechFlowModel model(MiniConfig());
  model.SetNormalization(-2.0, 2.0);
  Rng rng(6);
  FlowExample ex;
  ex.id = "g";
  ex.inputs = RandomInputs(7, &rng);
  ex.z_t = RandomTimbre(3, &rng);
  ResampleSeeds seeds{11, 12};
  nnet::ParamList params = model.Params();
  nnet::ZeroGrads(params);
  model.AccumulateGradients(ex, seeds);
  std::vector<Matrix> analytic;
  for (nnet::Param *p : params) analytic.push_back(p->grad);
  const double h = 1e-5;
  for (size_t k = 0; k < params.size(); ++k) {
    nnet::Param *p = params[k];
    for (Eigen::Index i = 0; i < p->value.size(); ++i) {
      double &w = p->value.data()[i];
      const double saved = w;
      w = saved + h;
      const double lp = model.AccumulateGradients(ex, seeds);
      w = saved - h;
      const double lm = model.AccumulateGradients(ex, seeds);
      w = saved;
      const double num = (lp - lm) / (2 * h), a = analytic[k].data()[i];
      ASSERT_LT(std::abs(a - num) / std::max(1e-6, std::abs(a) + std::abs(num)), 1e-3)
          << p->name << "[" << i << "] analytic " << a << " numeric " << num;
    }
  }
}

TEST(SpeechFlowTest, AllOffReconstructionDependsOnlyOnTimbreAndLength) {
  SpeechFlowConfig c = MiniConfig();
  SpeechFlowModel model(c);
  Rng rng(7);
  Vector zt = RandomTimbre(c.d_t, &rng);
  const FactorMask none = FactorMask::None();
  Matrix a = model.Reconstruct(MaskInputs(RandomInputs(30, &rng), none), zt);
  Matrix b = model.Reconstruct(MaskInputs(RandomInputs(30, &rng), none), zt);
  EXPECT_EQ(a, b);
  Matrix other = model.Reconstruct(MaskInputs(RandomInputs(30, &rng), none), RandomTimbre(c.d_t, &rng));
  EXPECT_GT((a - other).norm(), 0.0);
}

TEST(SpeechFlowTest, SerializationIsBitExact) {
  SpeechFlowModel model(MiniConfig());
  model.SetNormalization(-3.5, 1.25);
  std::stringstream ss;
  model.Write(ss);
  SpeechFlowModel copy;
  copy.Read(ss);
  EXPECT_EQ(copy.Hash(), model.Hash());
  EXPECT_EQ(copy.NormMean(), -3.5);
  Rng rng(8);
  EncoderInputs in = RandomInputs(9, &rng);
  Vector zt = RandomTimbre(3, &rng);
  EXPECT_EQ(copy.Reconstruct(in, zt), model.Reconstruct(in, zt));
}

TEST(SpeechFlowTest, ArtifactSidecarIsVerified) {
  auto dir = std::filesystem::temp_directory_path() / "emoflow-flow-test";
  std::filesystem::remove_all(dir);
  SpeechFlowModel model(MiniConfig());
  SaveSpeechFlow(model, {{"corpus", "unit"}}, dir / "flow.bin");
  Json side;
  SpeechFlowModel back = LoadSpeechFlow(dir / "flow.bin", &side);
  EXPECT_EQ(back.Hash(), model.Hash());
  EXPECT_EQ(side.at("corpus"), "unit");
  side["param_hash"] = "0";
  WriteJsonFile(dir / "flow.bin.json", side);
  EXPECT_THROW(LoadSpeechFlow(dir / "flow.bin", &side), Error);
  std::filesystem::remove_all(dir);
}

std::vector<FlowExample> ToySet(int n, int T, uint64_t seed) {
  // Smooth, low-rank spectrograms so a small model can make progress.
  Rng rng(seed);
  std::vector<FlowExample> out;
  for (int u = 0; u < n; ++u) {
    FlowExample ex;
    ex.id = "u" + std::to_string(u);
    const double rate = rng.Uniform(0.05, 0.3), tilt = rng.Uniform(0.02, 0.08);
    Matrix mel(T, kNumMelBins);
    for (int t = 0; t < T; ++t)
      for (int b = 0; b < kNumMelBins; ++b)
        mel(t, b) = -2.0 - tilt * b + 1.5 * std::sin(rate * t + 0.1 * b);
    ex.inputs.rhythm = ex.inputs.content = mel;
    ex.inputs.pitch = Matrix::Zero(T, 2);
    for (int t = 0; t < T; ++t) {
      ex.inputs.pitch(t, 0) = std::sin(rate * t);
      ex.inputs.pitch(t, 1) = 1.0;
    }
    ex.z_t = RandomTimbre(8, &rng);
    out.push_back(ex);
  }
  return out;
}

SpeechFlowConfig SmallConfig() {
  SpeechFlowConfig c;
  c.d_t = 8;
  c.hidden_c = 8;
  c.hidden_r = 4;
  c.hidden_f = 8;
  c.hidden_dec = 16;
  c.batch_size = 4;
  c.adam.learning_rate = 3e-3;
  c.seed = 7;
  return c;
}

TEST(SpeechFlowTest, TrainingReducesLoss) {
  std::vector<FlowExample> data = ToySet(16, 40, 7);
  SpeechFlowConfig c = SmallConfig();
  c.num_steps = 300;
  FlowTrainLog log;
  TrainSpeechFlow(data, {}, c, &log);
  ASSERT_EQ(log.train_loss.size(), 300u);
  double head = 0.0, tail = 0.0;
  for (int i = 0; i < 10; ++i) {
    head += log.train_loss[i];
    tail += log.train_loss[290 + i];
  }
  EXPECT_LT(tail, 0.7 * head);
}

TEST(SpeechFlowTest, ZeroLearningRateKeepsLossConstant) {
  std::vector<FlowExample> data = ToySet(4, 20, 9);
  SpeechFlowConfig c = SmallConfig();
  c.num_steps = 6;
  c.valid_every = 1;
  c.adam.learning_rate = 0.0;
  FlowTrainLog log;
  SpeechFlowModel m = TrainSpeechFlow(data, data, c, &log);
  ASSERT_EQ(log.valid_loss.size(), 6u);
  for (const auto &[step, loss] : log.valid_loss) EXPECT_EQ(loss, log.valid_loss[0].second);
  SpeechFlowModel init(c);
  nnet::ParamList a = m.Params(), b = init.Params();
  for (size_t k = 0; k < a.size(); ++k) EXPECT_EQ(a[k]->value, b[k]->value);
}

TEST(SpeechFlowTest, TrainingIsDeterministic) {
  std::vector<FlowExample> data = ToySet(4, 20, 10);
  SpeechFlowConfig c = SmallConfig();
  c.num_steps = 10;
  SpeechFlowModel a = TrainSpeechFlow(data, {}, c, nullptr);
  SpeechFlowModel b = TrainSpeechFlow(data, {}, c, nullptr);
  EXPECT_EQ(a.Hash(), b.Hash());
}

}  // namespace
}  // namespace emoflow
