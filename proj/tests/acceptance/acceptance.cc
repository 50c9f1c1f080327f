// tests/acceptance/acceptance.cc

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

// Acceptance run: trains the full pipeline on rhythm- and pitch-coded toy
// corpora, runs the invariant checks and the command-line determinism
// check, and prints one PASS/FAIL line per criterion.
//
// Usage: acceptance <emoflow-binary> <work-dir> [criterion ...]

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include "emoflow/base/error.h"
#include "emoflow/base/random.h"
#include "emoflow/eval/harness.h"
#include "emoflow/feat/resample.h"
#include "emoflow/ingest/split.h"
#include "emoflow/ingest/toy-corpus.h"

namespace emoflow {
namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

double Seconds(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Corpus geometry shared by both factor-coded corpora.
constexpr int kSpeakers = 16;
constexpr int kPerClass = 8;
const SplitRatios kRatios{0.75, 0.125, 0.125};

struct Verdict {
  bool pass = true;
  std::ostringstream detail;

  void Require(bool ok, const std::string &what) {
    if (!ok) pass = false;
    detail << (detail.tellp() > 0 ? "; " : "") << what << (ok ? "" : " [failed]");
  }
};

std::string Fmt(double v, int digits = 2) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

// ------------------------------------------------------------ Pipeline

struct CorpusRun {
  std::string name;
  CorpusManifest manifest;
  FeatureSet features;
  TimbreModel timbre;
  SpeechFlowModel flow;
  CorpusData data;
  FidelityReport fidelity;
  std::vector<ResultRow> rows;
  fs::path model_dir;
  double prep_seconds = 0.0;
  double flow_seconds = 0.0;
  std::map<int, double> system_seconds;

  const ResultRow &Row(int system_no) const {
    for (const ResultRow &r : rows)
      if (r.system_no == system_no) return r;
    EMO_ERR("no result for system " << system_no);
  }
};

CorpusRun RunCorpus(CodingFactor factor, uint64_t seed, const fs::path &work) {
  CorpusRun run;
  run.name = std::string("toy-") + CodingFactorName(factor);
  const fs::path dir = work / run.name;
  auto t0 = Clock::now();
  ToyCorpusSpec spec;
  spec.coding_factor = factor;
  spec.n_speakers = kSpeakers;
  spec.n_utterances_per_class = kPerClass;
  spec.seed = DeriveSeed(seed, "corpus/" + run.name);
  spec.corpus = run.name;
  run.manifest = SplitCorpus(SynthToyCorpus(spec, dir), kRatios, DeriveSeed(seed, "split"));
  run.features = Featurize(run.manifest, dir / "manifest.jsonl", FeatureConfig());

  TimbreConfig tc;
  tc.seed = DeriveSeed(seed, "timbre");
  std::vector<TimbreExample> timbre_data;
  for (const UtteranceRecord &r : run.manifest.records)
    if (r.split == Split::kTrain)
      timbre_data.push_back({r.id, r.speaker_id, run.features.Get(r.id).mel.frames});
  run.timbre = TrainTimbreEncoder(timbre_data, tc);
  run.data = BuildCorpusData(run.manifest, run.features, run.timbre, run.name);
  run.prep_seconds = Seconds(t0);

  t0 = Clock::now();
  SpeechFlowConfig fc;
  fc.seed = DeriveSeed(seed, "flow");
  FlowTrainLog log;
  run.flow = TrainSpeechFlow(run.data.train.examples, run.data.valid.examples, fc, &log);
  run.fidelity = MeasureFidelity(run.flow, run.data.test.examples);
  run.flow_seconds = Seconds(t0);
  std::cerr << run.name << ": features+timbre " << Fmt(run.prep_seconds, 1) << " s, flow "
            << Fmt(run.flow_seconds, 1) << " s, test MSE " << Fmt(run.fidelity.model_mse, 4)
            << " vs mean-frame " << Fmt(run.fidelity.mean_frame_mse, 4) << std::endl;

  AblationOptions opts;
  opts.acrnn.seed = 0;
  opts.seeds = {DeriveSeed(seed, "acrnn")};
  run.model_dir = dir / "models";
  opts.model_dir = run.model_dir;
  auto last = Clock::now();
  run.rows = RunAblation(run.flow, run.data, opts, [&](const ResultRow &r) {
    run.system_seconds[r.system_no] = Seconds(last);
    last = Clock::now();
    std::cerr << run.name << ": system " << r.system_no << " [" << r.tag << "] "
              << (r.Failed() ? "failed: " + r.error : "UAR " + Fmt(r.uar)) << " ("
              << Fmt(run.system_seconds[r.system_no], 1) << " s)" << std::endl;
  });
  EmitReport(run.rows, {{"corpus", run.name}}, dir / "report");
  return run;
}

double Uar(const CorpusRun &run, int system_no) {
  const ResultRow &r = run.Row(system_no);
  if (r.Failed()) EMO_ERR(run.name << " system " << system_no << " failed: " << r.error);
  return r.uar;
}

// ------------------------------------------------------------ Criteria

Verdict ChanceFloor(const CorpusRun &rhythm, const CorpusRun &pitch) {
  Verdict v;
  for (const CorpusRun *run : {&rhythm, &pitch}) {
    const double u = Uar(*run, 3);
    v.Require(std::abs(u - 25.0) <= 7.0, run->name + " system 3 UAR " + Fmt(u));
  }
  const double secs = rhythm.prep_seconds + rhythm.flow_seconds + rhythm.system_seconds.at(3);
  v.Require(secs <= 600.0, "runtime " + Fmt(secs, 0) + " s");
  return v;
}

Verdict FactorOrdering(const CorpusRun &rhythm, const CorpusRun &pitch) {
  Verdict v;
  const double r5 = Uar(rhythm, 5), r6 = Uar(rhythm, 6), p5 = Uar(pitch, 5), p6 = Uar(pitch, 6);
  v.Require(r5 - r6 >= 20.0, "rhythm: system 5 " + Fmt(r5) + " - system 6 " + Fmt(r6));
  v.Require(r5 >= 80.0, "rhythm: system 5 >= 80");
  v.Require(p6 - p5 >= 20.0, "pitch: system 6 " + Fmt(p6) + " - system 5 " + Fmt(p5));
  double secs = 0.0;
  for (const CorpusRun *run : {&rhythm, &pitch}) {
    secs += run->prep_seconds + run->flow_seconds;
    for (const auto &[k, s] : run->system_seconds) secs += s;
  }
  v.Require(secs <= 1800.0, "runtime " + Fmt(secs, 0) + " s");
  return v;
}

Verdict Fidelity(const CorpusRun &rhythm, const CorpusRun &pitch) {
  Verdict v;
  for (const CorpusRun *run : {&rhythm, &pitch}) {
    const double u1 = Uar(*run, 1), u2 = Uar(*run, 2);
    v.Require(std::abs(u1 - u2) <= 15.0,
              run->name + ": |system 1 " + Fmt(u1) + " - system 2 " + Fmt(u2) + "|");
    v.Require(run->fidelity.model_mse < 0.5 * run->fidelity.mean_frame_mse,
              run->name + ": MSE " + Fmt(run->fidelity.model_mse, 4) + " vs mean-frame " +
                  Fmt(run->fidelity.mean_frame_mse, 4));
  }
  return v;
}

Verdict CrossCorpus(const CorpusRun &a, const CorpusRun &b) {
  Verdict v;
  const double within = Uar(a, 2);
  // Corpus B seen through corpus A's timbre encoder and flow.
  CorpusData b_seen = BuildCorpusData(b.manifest, b.features, a.timbre, b.name);
  AcrnnModel ser = LoadAcrnn(a.model_dir / "system2.bin");
  ResultRow x = CrossCorpusEval(ser, a.flow, b_seen.test, a.name, b.name, std::string("CRP"));
  v.Require(std::abs(x.uar - 25.0) <= 10.0, a.name + " -> " + b.name + " UAR " + Fmt(x.uar));
  v.Require(within >= 80.0, "within " + a.name + " UAR " + Fmt(within));
  return v;
}

double BruteForceUar(const std::vector<int> &preds, const std::vector<int> &labels) {
  std::map<int, std::pair<int, int>> per_class;  // hits, total
  for (size_t i = 0; i < labels.size(); ++i) {
    per_class[labels[i]].second++;
    if (preds[i] == labels[i]) per_class[labels[i]].first++;
  }
  double sum = 0.0;
  for (const auto &[k, ht] : per_class) sum += static_cast<double>(ht.first) / ht.second;
  return 100.0 * sum / static_cast<double>(per_class.size());
}

Verdict MetricOracle() {
  Verdict v;
  Rng rng(2024);
  double worst = 0.0, worst_identity = 0.0;
  int confusion_mismatch = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = static_cast<int>(rng.UniformInt(1, 300));
    const int classes = static_cast<int>(rng.UniformInt(1, kNumEmotions));
    std::vector<int> preds(n), labels(n);
    for (int i = 0; i < n; ++i) {
      labels[i] = static_cast<int>(rng.UniformInt(0, classes - 1));
      preds[i] = static_cast<int>(rng.UniformInt(0, kNumEmotions - 1));
    }
    const double u = emoflow::Uar(preds, labels);
    worst = std::max(worst, std::abs(u - BruteForceUar(preds, labels)));
    ConfusionMatrix cm = ComputeConfusion(preds, labels);
    for (int t = 0; t < kNumEmotions; ++t)
      for (int p = 0; p < kNumEmotions; ++p) {
        int64_t count = 0;
        for (int i = 0; i < n; ++i) count += labels[i] == t && preds[i] == p;
        confusion_mismatch += count != cm.counts[t][p];
      }
    Matrix norm = cm.Normalized();
    double diag = 0.0;
    int present = 0;
    for (int k = 0; k < kNumEmotions; ++k)
      if (cm.RowTotal(k) > 0) {
        diag += norm(k, k);
        ++present;
      }
    worst_identity = std::max(worst_identity, std::abs(u - diag / present));
  }
  v.Require(worst <= 1e-9, "max |uar - oracle| " + Fmt(worst, 12));
  v.Require(confusion_mismatch == 0, "confusion mismatches " + std::to_string(confusion_mismatch));
  v.Require(worst_identity <= 1e-9, "max |uar - diagonal mean| " + Fmt(worst_identity, 12));
  return v;
}

Matrix RandomMatrix(int rows, int cols, double lo, double hi, Rng *rng) {
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = rng->Uniform(lo, hi);
  return m;
}

EncoderInputs RandomInputs(int frames, Rng *rng) {
  EncoderInputs in;
  in.content = RandomMatrix(frames, kNumMelBins, -6.0, 2.0, rng);
  in.rhythm = in.content;
  in.pitch = Matrix(frames, 2);
  for (int t = 0; t < frames; ++t) {
    in.pitch(t, 0) = rng->Normal();
    in.pitch(t, 1) = 1.0;
  }
  return in;
}

Vector RandomUnit(int d, Rng *rng) {
  Vector v(d);
  for (int i = 0; i < d; ++i) v(i) = rng->Normal();
  return v / v.norm();
}

// Largest relative error between analytic gradients and central
// differences of `loss` over every parameter entry.
template <typename LossFn>
double WorstGradientError(const nnet::ParamList &params, LossFn loss) {
  nnet::ZeroGrads(params);
  loss();
  std::vector<Matrix> analytic;
  for (nnet::Param *p : params) analytic.push_back(p->grad);
  const double h = 1e-5;
  double worst = 0.0;
  for (size_t k = 0; k < params.size(); ++k)
    for (Eigen::Index i = 0; i < params[k]->value.size(); ++i) {
      double &w = params[k]->value.data()[i];
      const double saved = w;
      w = saved + h;
      const double lp = loss();
      w = saved - h;
      const double lm = loss();
      w = saved;
      const double num = (lp - lm) / (2 * h), a = analytic[k].data()[i];
      worst = std::max(worst, std::abs(a - num) / std::max(1e-6, std::abs(a) + std::abs(num)));
    }
  return worst;
}

SpeechFlowConfig MiniFlowConfig() {
  SpeechFlowConfig c;
  c.d_c = 2;
  c.d_r = 1;
  c.d_f = 2;
  c.d_t = 3;
  c.down_c = c.down_r = c.down_f = 2;
  c.hidden_c = c.hidden_r = c.hidden_f = 2;
  c.hidden_dec = 3;
  c.seed = 13;
  return c;
}

AcrnnConfig MiniAcrnnConfig() {
  AcrnnConfig c;
  c.num_bins = 8;
  c.conv1_channels = c.conv_channels = 2;
  c.num_conv_layers = 1;
  c.kernel_t = c.kernel_f = 3;
  c.pool_t = c.pool_f = 2;
  c.fc_dim = 3;
  c.rnn_hidden = 2;
  c.att_dim = 2;
  c.seed = 14;
  return c;
}

Verdict Numerics() {
  Verdict v;
  Rng rng(6);
  SpeechFlowModel flow(MiniFlowConfig());
  flow.SetNormalization(-2.0, 2.0);
  FlowExample ex;
  ex.id = "g";
  ex.inputs = RandomInputs(7, &rng);
  ex.z_t = RandomUnit(3, &rng);
  const ResampleSeeds seeds{21, 22};
  const double flow_err =
      WorstGradientError(flow.Params(), [&] { return flow.AccumulateGradients(ex, seeds); });
  v.Require(flow_err < 1e-3, "flow gradient error " + Fmt(flow_err, 8));

  AcrnnModel mini(MiniAcrnnConfig(), kRawTag);
  mini.SetNormalization({-3.0, 0.0, 0.0}, {2.0, 1.0, 1.5});
  AcrnnInput x = MakeAcrnnInput(RandomMatrix(6, 8, -8.0, 2.0, &rng));
  const double ser_err =
      WorstGradientError(mini.Params(), [&] { return mini.AccumulateGradients(x, 1, 1.0); });
  v.Require(ser_err < 1e-3, "classifier gradient error " + Fmt(ser_err, 8));

  AcrnnConfig c;
  c.seed = 15;
  AcrnnModel model(c, kRawTag);
  double worst = 0.0;
  bool shapes_ok = true, nonneg = true;
  for (int trial = 0; trial < 500; ++trial) {
    const int T = static_cast<int>(rng.UniformInt(3, 60));
    EmotionPosterior p = model.Forward(MakeAcrnnInput(RandomMatrix(T, 80, -9.0, 3.0, &rng)));
    shapes_ok = shapes_ok && p.probs.size() == kNumEmotions && p.attention.size() == T / c.pool_t;
    nonneg = nonneg && p.probs.minCoeff() >= 0.0 && p.attention.minCoeff() >= 0.0;
    worst = std::max({worst, std::abs(p.probs.sum() - 1.0), std::abs(p.attention.sum() - 1.0)});
  }
  v.Require(shapes_ok && nonneg && worst < 1e-9,
            "simplex over 500 inputs, max |sum - 1| " + Fmt(worst, 12));
  return v;
}

Verdict Invariants(const CorpusRun &pitch_run) {
  Verdict v;
  // Pitch normalization over each speaker's voiced frames.
  std::map<std::string, std::vector<double>> voiced;
  for (const auto &[id, u] : pitch_run.features.utterances) {
    Matrix p = pitch_run.features.NormalizedPitch(id);
    for (Eigen::Index t = 0; t < p.rows(); ++t)
      if (p(t, 1) > 0.5) voiced[u.speaker_id].push_back(p(t, 0));
  }
  double worst_mean = 0.0, worst_std = 0.0;
  int speakers = 0;
  for (const auto &[spk, values] : voiced) {
    if (values.size() < 2) continue;
    const SpeakerPitchStats &stats = pitch_run.features.pitch_stats.at(spk);
    if (stats.std <= 0.0 || stats.n_voiced < 2) continue;
    double mean = 0.0, var = 0.0;
    for (double x : values) mean += x;
    mean /= static_cast<double>(values.size());
    for (double x : values) var += (x - mean) * (x - mean);
    var /= static_cast<double>(values.size());
    worst_mean = std::max(worst_mean, std::abs(mean));
    worst_std = std::max(worst_std, std::abs(std::sqrt(var) - 1.0));
    ++speakers;
  }
  v.Require(speakers > 0 && worst_mean < 1e-6 && worst_std < 1e-6,
            "pitch normalization over " + std::to_string(speakers) + " speakers, max |mean| " +
                Fmt(worst_mean, 9) + ", max |std - 1| " + Fmt(worst_std, 9));

  // Random resampling length bounds.
  RandomResampleOptions rr;
  Rng rng(8);
  int violations = 0;
  for (int draw = 0; draw < 10000; ++draw) {
    const int T = static_cast<int>(rng.UniformInt(1, 400));
    ResamplePlan plan = PlanRandomResample(T, DeriveSeed(99, std::to_string(draw)), rr);
    const int out = plan.OutputLength();
    const int lo = static_cast<int>(std::ceil(rr.min_factor * T - 1e-9));
    const int hi = static_cast<int>(std::floor(rr.max_factor * T)) + 1;
    int in_total = 0;
    for (int len : plan.in_lengths) in_total += len;
    bool ok = out >= lo && out <= hi && in_total == T;
    for (double f : plan.factors) ok = ok && f >= rr.min_factor && f <= rr.max_factor;
    violations += !ok;
  }
  v.Require(violations == 0, "resample bounds violations in 10000 draws " + std::to_string(violations));

  RandomResampleOptions unit = rr;
  unit.min_factor = unit.max_factor = 1.0;
  bool identity = true;
  for (int draw = 0; draw < 50; ++draw) {
    Matrix seq = RandomMatrix(static_cast<int>(rng.UniformInt(1, 200)), 5, -1.0, 1.0, &rng);
    identity = identity && RandomResample(seq, static_cast<uint64_t>(draw), unit) == seq;
  }
  v.Require(identity, "resampling with factors [1, 1] is the identity");

  bool idempotent = true;
  EncoderInputs in = RandomInputs(25, &rng);
  for (const AblationSystem &s : EnumerateSystems()) {
    EncoderInputs once = MaskInputs(in, s.mask), twice = MaskInputs(once, s.mask);
    idempotent = idempotent && once.content == twice.content && once.rhythm == twice.rhythm &&
                 once.pitch == twice.pitch;
  }
  v.Require(idempotent, "masking is idempotent");

  const SpeechFlowModel &flow = pitch_run.flow;
  const int d_t = pitch_run.timbre.EmbeddingDim();
  Vector zt = RandomUnit(d_t, &rng);
  Matrix a = flow.Reconstruct(MaskInputs(RandomInputs(90, &rng), FactorMask::None()), zt);
  Matrix b = flow.Reconstruct(MaskInputs(RandomInputs(90, &rng), FactorMask::None()), zt);
  Matrix c = flow.Reconstruct(MaskInputs(RandomInputs(90, &rng), FactorMask::None()),
                              RandomUnit(d_t, &rng));
  v.Require(a == b && (a - c).norm() > 0.0,
            "all-off reconstruction depends only on timbre and length");
  return v;
}

int Shell(const std::string &cmd) {
  std::cerr << "+ " << cmd << std::endl;
  return std::system(cmd.c_str());
}

Verdict Determinism(const fs::path &cli, const fs::path &work) {
  Verdict v;
  const std::string common =
      " --seed 7 --set timbre.num_steps=30 --set flow.num_steps=20 --set acrnn.num_steps=20"
      " --set acrnn.valid_every=10 -v 0 ";
  std::string csv[2];
  for (int run = 0; run < 2; ++run) {
    const fs::path dir = work / ("determinism-" + std::to_string(run));
    fs::remove_all(dir);
    const std::string e = cli.string() + common, d = dir.string();
    const std::vector<std::string> steps = {
        e + "synth-toy --factor rhythm --speakers 6 --per-class 8 --duration 1.0 --out " + d + "/corpus",
        e + "prepare --manifest " + d + "/corpus/manifest.jsonl --ratios 0.66,0.17,0.17 --out " + d + "/prepared",
        e + "featurize --manifest " + d + "/prepared/manifest.jsonl --out " + d + "/features",
        e + "train-timbre --manifest " + d + "/prepared/manifest.jsonl --features " + d +
            "/features --out " + d + "/timbre.bin",
        e + "train-flow --manifest " + d + "/prepared/manifest.jsonl --features " + d +
            "/features --timbre " + d + "/timbre.bin --out " + d + "/flow.bin",
        e + "ablate --flow " + d + "/flow.bin --timbre " + d + "/timbre.bin --manifest " + d +
            "/prepared/manifest.jsonl --features " + d + "/features --out " + d + "/ablate",
        e + "report --inputs " + d + "/ablate --out " + d + "/report"};
    for (const std::string &s : steps)
      if (Shell(s + " 2>>" + (work / "determinism.log").string()) != 0) {
        v.Require(false, "command failed: " + s.substr(0, 60));
        return v;
      }
    csv[run] = ReadTextFile(dir / "report" / "results.csv");
  }
  int lines = 0;
  for (char ch : csv[0]) lines += ch == '\n';
  v.Require(csv[0] == csv[1], "results.csv byte-identical across runs");
  v.Require(lines == 10, "results.csv has " + std::to_string(lines - 1) + " system rows");
  std::set<std::string> tags;
  for (const AblationSystem &s : EnumerateSystems()) tags.insert(s.Tag());
  v.Require(EnumerateSystems().size() == 9 && tags.size() == 9, "enumerate_systems gives 9 systems");
  return v;
}

int Main(int argc, char *argv[]) {
  if (argc < 3) {
    std::cerr << "usage: acceptance <emoflow-binary> <work-dir> [criterion ...]\n";
    return 2;
  }
  const fs::path cli = fs::absolute(argv[1]), work = fs::absolute(argv[2]);
  std::set<int> wanted;
  for (int i = 3; i < argc; ++i) wanted.insert(std::atoi(argv[i]));
  if (wanted.empty()) wanted = {1, 2, 3, 4, 5, 6, 7, 8};
  fs::remove_all(work);
  fs::create_directories(work);

  const bool need_corpora = wanted.count(1) || wanted.count(2) || wanted.count(3) ||
                            wanted.count(4) || wanted.count(7);
  std::optional<CorpusRun> rhythm, pitch;
  if (need_corpora) {
    rhythm = RunCorpus(CodingFactor::kRhythm, 101, work);
    pitch = RunCorpus(CodingFactor::kPitch, 202, work);
  }

  const std::map<int, std::string> names = {
      {1, "chance floor"},       {2, "factor recovery ordering"}, {3, "reconstruction fidelity"},
      {4, "cross-corpus degradation"}, {5, "metric oracle"},      {6, "numerical correctness"},
      {7, "pipeline invariants"}, {8, "end-to-end determinism"}};
  int failures = 0;
  for (int k : wanted) {
    Verdict v;
    try {
      switch (k) {
        case 1: v = ChanceFloor(*rhythm, *pitch); break;
        case 2: v = FactorOrdering(*rhythm, *pitch); break;
        case 3: v = Fidelity(*rhythm, *pitch); break;
        case 4: v = CrossCorpus(*rhythm, *pitch); break;
        case 5: v = MetricOracle(); break;
        case 6: v = Numerics(); break;
        case 7: v = Invariants(*pitch); break;
        case 8: v = Determinism(cli, work); break;
        default: v.Require(false, "unknown criterion"); break;
      }
    } catch (const std::exception &e) {
      v.Require(false, std::string("error: ") + e.what());
    }
    failures += !v.pass;
    std::cout << (v.pass ? "PASS" : "FAIL") << "  criterion " << k << " "
              << (names.count(k) ? names.at(k) : "?") << ": " << v.detail.str() << std::endl;
  }
  return failures == 0 ? 0 : 1;
}

}  // namespace
}  // namespace emoflow

int main(int argc, char *argv[]) { return emoflow::Main(argc, argv); }
