// src/cli/commands.cc

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

#include "emoflow/cli/commands.h"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "emoflow/base/error.h"
#include "emoflow/base/random.h"
#include "emoflow/cli/run-config.h"
#include "emoflow/eval/harness.h"
#include "emoflow/feat/spectrogram-image.h"
#include "emoflow/ingest/labels.h"
#include "emoflow/ingest/split.h"
#include "emoflow/ingest/toy-corpus.h"
#include "emoflow/ingest/wave.h"

namespace emoflow {

namespace {

namespace fs = std::filesystem;

// Options shared by every subcommand.
struct CommonOptions {
  std::string config_path;
  std::vector<std::string> overrides;
  std::optional<uint64_t> seed;
  bool force = false;
  int verbose = 0;

  RunConfig Load() const {
    return LoadRunConfig(config_path.empty() ? std::nullopt : std::optional<fs::path>(config_path),
                         overrides, seed);
  }
};

// Compares a recorded hash with the current one; --force downgrades the
// refusal to a warning.
void CheckHash(const std::string &what, const std::string &recorded, const std::string &expected,
               const CommonOptions &common) {
  if (recorded == expected) return;
  if (common.force) {
    EMO_WARN(what << " hash " << recorded << " differs from " << expected << "; continuing (--force)");
    return;
  }
  EMO_ERR(what << " was produced with hash " << recorded << " but the current run expects "
          << expected << "; pass --force to use it anyway");
}

std::string CorpusName(const CorpusManifest &m, const std::string &given) {
  if (!given.empty()) return given;
  if (!m.records.empty() && !m.records[0].corpus.empty()) return m.records[0].corpus;
  return "corpus";
}

FeatureSet LoadFeatures(const fs::path &dir, const RunConfig &cfg, const CommonOptions &common) {
  return LoadFeatureSet(dir, common.force ? std::nullopt
                                          : std::optional<std::string>(cfg.feat.Hash()));
}

// Loads features from `dir` when given, otherwise featurizes the manifest
// into `fallback`.
FeatureSet FeaturesFor(const CorpusManifest &manifest, const fs::path &manifest_path,
                       const std::string &dir, const fs::path &fallback, const RunConfig &cfg,
                       const CommonOptions &common) {
  if (!dir.empty()) {
    FeatureSet set = LoadFeatures(dir, cfg, common);
    set.CheckCovers(manifest);
    return set;
  }
  FeatureSet set = Featurize(manifest, manifest_path, cfg.feat);
  SaveFeatureSet(set, fallback);
  return set;
}

TimbreModel LoadTimbreChecked(const fs::path &path, const RunConfig &cfg,
                              const std::string &feature_hash, const CommonOptions &common) {
  Json side;
  TimbreModel m = LoadTimbreModel(path, &side);
  CheckHash("timbre model " + path.string() + " config", side.value("config_hash", ""),
            cfg.SectionHash("timbre"), common);
  CheckHash("timbre model " + path.string() + " features", side.value("feature_hash", ""),
            feature_hash, common);
  return m;
}

SpeechFlowModel LoadFlowChecked(const fs::path &path, const RunConfig &cfg,
                                const std::string &feature_hash, const std::string &timbre_hash,
                                const CommonOptions &common, Json *sidecar) {
  SpeechFlowModel m = LoadSpeechFlow(path, sidecar);
  CheckHash("flow model " + path.string() + " config", sidecar->value("config_hash", ""),
            cfg.SectionHash("flow"), common);
  CheckHash("flow model " + path.string() + " features", sidecar->value("feature_hash", ""),
            feature_hash, common);
  CheckHash("flow model " + path.string() + " timbre", sidecar->value("timbre_hash", ""),
            timbre_hash, common);
  return m;
}

std::vector<TimbreExample> TimbreData(const CorpusManifest &m, const FeatureSet &features) {
  bool any_train = false;
  for (const auto &r : m.records) any_train = any_train || r.split == Split::kTrain;
  std::vector<TimbreExample> out;
  for (const auto &r : m.records)
    if (!any_train || r.split == Split::kTrain)
      out.push_back({r.id, r.speaker_id, features.Get(r.id).mel.frames});
  return out;
}

// ---------------------------------------------------------------- Datasets
//
// A classifier dataset directory: index.json plus mels/<id>.mel.

struct SerDataset {
  std::string mask_tag;
  std::string corpus;
  std::string manifest_id;
  std::string flow_hash;
  std::map<Split, std::vector<SerExample>> splits;
};

void SaveSerDataset(const SerDataset &d, const fs::path &dir) {
  EnsureDirectory(dir / "mels");
  Json items = Json::array();
  for (const auto &[split, examples] : d.splits)
    for (const SerExample &ex : examples) {
      const std::string file = "mels/" + ex.id + ".mel";
      std::ofstream os(dir / file, std::ios::binary | std::ios::trunc);
      if (!os) EMO_ERR("cannot write " << (dir / file).string());
      WriteMatrix(os, ex.mel);
      if (!os) EMO_ERR("failed writing " << (dir / file).string());
      items.push_back({{"id", ex.id},
                       {"label", std::string(1, EmotionCode(EmotionFromIndex(ex.label)))},
                       {"split", SplitName(split)},
                       {"file", file}});
    }
  WriteJsonFile(dir / "index.json", {{"kind", "ser-dataset"},
                                     {"mask_tag", d.mask_tag},
                                     {"corpus", d.corpus},
                                     {"manifest_id", d.manifest_id},
                                     {"flow_hash", d.flow_hash},
                                     {"items", items}});
}

SerDataset LoadSerDataset(const fs::path &dir) {
  Json index = ReadJsonFile(dir / "index.json");
  if (index.value("kind", "") != "ser-dataset")
    EMO_ERR(dir.string() << " is not a classifier dataset (run reconstruct first)");
  SerDataset d;
  d.mask_tag = index.at("mask_tag");
  d.corpus = index.at("corpus");
  d.manifest_id = index.at("manifest_id");
  d.flow_hash = index.at("flow_hash");
  for (const Json &item : index.at("items")) {
    std::ifstream is(dir / item.at("file").get<std::string>(), std::ios::binary);
    if (!is) EMO_ERR("missing dataset file " << item.at("file").get<std::string>());
    SerExample ex;
    ex.id = item.at("id");
    ex.mel = ReadMatrix(is);
    ex.label = EmotionIndex(*EmotionFromCode(item.at("label").get<std::string>()));
    ex.mask_tag = d.mask_tag;
    d.splits[SplitFromName(item.at("split"))].push_back(std::move(ex));
  }
  return d;
}

std::vector<uint64_t> ReadSeedFile(const fs::path &path) {
  std::istringstream is(ReadTextFile(path));
  std::vector<uint64_t> seeds;
  std::string tok;
  while (is >> tok) {
    try {
      size_t used = 0;
      seeds.push_back(std::stoull(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::logic_error &) {
      EMO_USAGE_ERR("seed file " << path.string() << " holds a non-integer token '" << tok << "'");
    }
  }
  if (seeds.empty()) EMO_USAGE_ERR("seed file " << path.string() << " is empty");
  return seeds;
}

Json ConfigProvenance(const RunConfig &cfg) {
  Json hashes;
  for (const std::string &s : ConfigSections()) hashes[s] = cfg.SectionHash(s);
  return {{"config", cfg.ToJson()}, {"config_hashes", hashes}};
}

// ------------------------------------------------------------- Commands

struct SynthArgs {
  std::string factor = "rhythm";
  int speakers = 8;
  int per_class = 16;
  double duration = 2.0;
  std::string corpus;
  std::string out;
};

void CmdSynthToy(const SynthArgs &a, const CommonOptions &common) {
  const RunConfig cfg = common.Load();
  ToyCorpusSpec spec;
  spec.coding_factor = CodingFactorFromName(a.factor);
  spec.n_speakers = a.speakers;
  spec.n_utterances_per_class = a.per_class;
  spec.utterance_duration = a.duration;
  spec.seed = StageSeed(cfg.seed, "synth-toy");
  spec.corpus = a.corpus.empty() ? "toy-" + a.factor : a.corpus;
  CorpusManifest m = SynthToyCorpus(spec, a.out);
  EMO_LOG("wrote " << m.records.size() << " utterances to " << a.out);
}

struct PrepareArgs {
  std::string manifest;
  std::string ratios;  // config value when empty
  std::string labels;  // optional "id<TAB>raw label" file
  std::string scheme = "default";
  std::vector<std::string> merges;
  std::string out;
};

void CmdPrepare(const PrepareArgs &a, const CommonOptions &common) {
  const RunConfig cfg = common.Load();
  CorpusManifest in = LoadManifest(a.manifest);
  if (!a.labels.empty()) {
    LabelSchemeRegistry registry;
    for (const std::string &m : a.merges) ApplyMergeSpec(m, &registry);
    std::map<std::string, std::string> raw;
    std::istringstream is(ReadTextFile(a.labels));
    std::string line;
    while (std::getline(is, line)) {
      const size_t tab = line.find('\t');
      if (tab != std::string::npos) raw[line.substr(0, tab)] = line.substr(tab + 1);
    }
    std::vector<UtteranceRecord> kept;
    for (UtteranceRecord r : in.records) {
      auto it = raw.find(r.id);
      if (it == raw.end()) continue;
      r.label = registry.Map(it->second, a.scheme);
      if (r.label) kept.push_back(r);
    }
    EMO_LOG("kept " << kept.size() << " of " << in.records.size() << " records after label mapping");
    in.records = kept;
  }
  EnsureDirectory(fs::path(a.out) / "wav");
  CorpusManifest out;
  for (UtteranceRecord r : in.records) {
    Waveform w = StandardizeAudio(ReadWave(ResolveAudioPath(a.manifest, r)));
    r.audio_path = "wav/" + r.id + ".wav";
    WriteWave16(fs::path(a.out) / r.audio_path, w);
    r.duration = w.Duration();
    out.records.push_back(r);
  }
  const SplitRatios ratios = a.ratios.empty() ? cfg.split : ParseSplitRatios(a.ratios);
  out = SplitCorpus(out, ratios, StageSeed(cfg.seed, "split"));
  WriteManifest(out, fs::path(a.out) / "manifest.jsonl");
  EMO_LOG("prepared " << out.records.size() << " records in " << a.out);
}

struct FeaturizeArgs {
  std::string manifest;
  std::string out;
  int images = 0;
};

void CmdFeaturize(const FeaturizeArgs &a, const CommonOptions &common) {
  const RunConfig cfg = common.Load();
  CorpusManifest m = LoadManifest(a.manifest);
  FeatureSet set = Featurize(m, a.manifest, cfg.feat);
  SaveFeatureSet(set, a.out);
  for (int i = 0; i < a.images && i < static_cast<int>(m.records.size()); ++i)
    RenderSpectrogramImage(set.Get(m.records[i].id).mel,
                           fs::path(a.out) / "images" / (m.records[i].id + ".png"));
  EMO_LOG("featurized " << set.utterances.size() << " utterances (config " << cfg.feat.Hash() << ")");
}

struct TrainTimbreArgs {
  std::string manifest;
  std::string features;
  std::string out;
};

void CmdTrainTimbre(const TrainTimbreArgs &a, const CommonOptions &common) {
  const RunConfig cfg = common.Load();
  CorpusManifest m = LoadManifest(a.manifest);
  FeatureSet features = FeaturesFor(m, a.manifest, a.features, fs::path(a.out).parent_path() / "features",
                                    cfg, common);
  std::vector<double> losses;
  TimbreModel model = TrainTimbreEncoder(TimbreData(m, features), cfg.timbre, &losses);
  SaveTimbreModel(model,
                  {{"config_hash", cfg.SectionHash("timbre")},
                   {"feature_hash", features.config.Hash()},
                   {"manifest_id", ManifestHash(m)},
                   {"seed", cfg.timbre.seed},
                   {"final_loss", losses.empty() ? 0.0 : losses.back()}},
                  a.out);
  EMO_LOG("timbre model with " << model.Speakers().size() << " speakers written to " << a.out);
}

struct TrainFlowArgs {
  std::string manifest;
  std::string features;
  std::string timbre;
  std::string name;
  std::string out;
};

void CmdTrainFlow(const TrainFlowArgs &a, const CommonOptions &common) {
  const RunConfig cfg = common.Load();
  CorpusManifest m = LoadManifest(a.manifest);
  FeatureSet features = LoadFeatures(a.features, cfg, common);
  TimbreModel timbre = LoadTimbreChecked(a.timbre, cfg, features.config.Hash(), common);
  if (timbre.EmbeddingDim() != cfg.flow.d_t)
    EMO_USAGE_ERR("timbre width " << timbre.EmbeddingDim() << " differs from flow.d_t " << cfg.flow.d_t);
  CorpusData data = BuildCorpusData(m, features, timbre, CorpusName(m, a.name));
  FlowTrainLog log;
  SpeechFlowModel model = TrainSpeechFlow(data.train.examples, data.valid.examples, cfg.flow, &log,
                                          [](int step, double loss) {
                                            EMO_VLOG(2, "flow step " << step << " loss " << loss);
                                          });
  FidelityReport fid = MeasureFidelity(model, data.valid.examples.empty() ? data.train.examples
                                                                          : data.valid.examples);
  SaveSpeechFlow(model,
                 {{"config_hash", cfg.SectionHash("flow")},
                  {"feature_hash", features.config.Hash()},
                  {"timbre_hash", timbre.Hash()},
                  {"timbre_path", fs::absolute(a.timbre).string()},
                  {"corpus", data.name},
                  {"manifest_id", data.manifest_id},
                  {"seed", cfg.flow.seed},
                  {"best_step", log.best_step},
                  {"valid_loss", log.best_valid_loss},
                  {"fidelity_model_mse", fid.model_mse},
                  {"fidelity_mean_frame_mse", fid.mean_frame_mse}},
                 a.out);
  EMO_LOG("flow model written to " << a.out << " (validation MSE " << fid.model_mse
          << ", mean-frame MSE " << fid.mean_frame_mse << ")");
}

struct ReconstructArgs {
  std::string flow;
  std::string timbre;
  std::string manifest;
  std::string features;
  std::string mask = "CRP";
  int images = 0;
  std::string out;
};

void CmdReconstruct(const ReconstructArgs &a, const CommonOptions &common) {
  const RunConfig cfg = common.Load();
  const AblationSystem system = SystemForTag(a.mask == kRawTag ? a.mask : FactorMask::FromTag(a.mask).Tag());
  CorpusManifest m = LoadManifest(a.manifest);
  FeatureSet features = LoadFeatures(a.features, cfg, common);
  TimbreModel timbre = LoadTimbreChecked(a.timbre, cfg, features.config.Hash(), common);
  Json side;
  SpeechFlowModel flow = LoadFlowChecked(a.flow, cfg, features.config.Hash(), timbre.Hash(), common, &side);
  CorpusData data = BuildCorpusData(m, features, timbre, side.value("corpus", CorpusName(m, "")));
  SerDataset d;
  d.mask_tag = system.Tag();
  d.corpus = data.name;
  d.manifest_id = data.manifest_id;
  d.flow_hash = flow.Hash();
  d.splits[Split::kTrain] = SystemDataset(data.train, system, flow);
  d.splits[Split::kValid] = SystemDataset(data.valid, system, flow);
  d.splits[Split::kTest] = SystemDataset(data.test, system, flow);
  SaveSerDataset(d, a.out);
  int drawn = 0;
  for (const auto &[split, examples] : d.splits)
    for (const SerExample &ex : examples) {
      if (drawn >= a.images) break;
      MelSpectrogram mel;
      mel.frames = ex.mel;
      RenderSpectrogramImage(mel, fs::path(a.out) / "images" / (ex.id + "_" + system.Tag() + ".png"));
      ++drawn;
    }
  EMO_LOG("reconstructed " << data.train.examples.size() + data.valid.examples.size() +
                                  data.test.examples.size()
          << " utterances under " << system.Tag());
}

struct TrainSerArgs {
  std::string dataset;
  std::string mask_tag;
  std::string out;
};

void CmdTrainSer(const TrainSerArgs &a, const CommonOptions &common) {
  const RunConfig cfg = common.Load();
  SerDataset d = LoadSerDataset(a.dataset);
  if (d.mask_tag != a.mask_tag)
    EMO_ERR("dataset " << a.dataset << " holds '" << d.mask_tag << "' features but --mask-tag is '"
            << a.mask_tag << "'");
  AcrnnTrainLog log;
  AcrnnModel model = TrainAcrnn(d.splits[Split::kTrain], d.splits[Split::kValid], cfg.acrnn,
                                a.mask_tag, &log);
  double test_uar = -1.0;
  if (!d.splits[Split::kTest].empty()) {
    std::vector<int> labels;
    for (const auto &ex : d.splits[Split::kTest]) labels.push_back(ex.label);
    test_uar = Uar(PredictAcrnn(model, d.splits[Split::kTest]), labels);
  }
  SaveAcrnn(model,
            {{"config_hash", cfg.SectionHash("acrnn")},
             {"corpus", d.corpus},
             {"training_manifest_id", d.manifest_id},
             {"flow_hash", d.flow_hash},
             {"valid_uar", log.best_valid_uar},
             {"best_step", log.best_step},
             {"test_uar", test_uar}},
            a.out);
  EMO_LOG("classifier [" << a.mask_tag << "] written to " << a.out << " (validation UAR "
          << log.best_valid_uar << ", test UAR " << test_uar << ")");
}

struct AblateArgs {
  std::string flow;
  std::string timbre;
  std::string manifest;
  std::string features;
  std::string seeds;
  int repeats = 0;
  std::vector<int> systems;
  std::string name;
  std::string out;
};

int CmdAblate(const AblateArgs &a, const CommonOptions &common) {
  const RunConfig cfg = common.Load();
  CorpusManifest m = LoadManifest(a.manifest);
  const fs::path out(a.out);
  FeatureSet features = FeaturesFor(m, a.manifest, a.features, out / "features", cfg, common);
  TimbreModel timbre = LoadTimbreChecked(a.timbre, cfg, features.config.Hash(), common);
  Json side;
  SpeechFlowModel flow = LoadFlowChecked(a.flow, cfg, features.config.Hash(), timbre.Hash(), common, &side);
  CorpusData data = BuildCorpusData(m, features, timbre,
                                    a.name.empty() ? side.value("corpus", CorpusName(m, "")) : a.name);
  AblationOptions opts;
  opts.acrnn = cfg.acrnn;
  if (!a.seeds.empty()) {
    opts.seeds = ReadSeedFile(a.seeds);
    if (a.repeats > 0) {
      if (a.repeats > static_cast<int>(opts.seeds.size()))
        EMO_USAGE_ERR("--repeats " << a.repeats << " exceeds the " << opts.seeds.size()
                      << " listed seeds");
      opts.seeds.resize(a.repeats);
    }
  } else {
    opts.seeds = {cfg.acrnn.seed};
    for (int k = 1; k < a.repeats; ++k)
      opts.seeds.push_back(DeriveSeed(cfg.acrnn.seed, "repeat" + std::to_string(k)));
  }
  opts.systems = a.systems;
  opts.model_dir = out / "models";
  Json prov = ConfigProvenance(cfg);
  prov["command"] = "ablate";
  prov["corpus"] = data.name;
  prov["manifest_id"] = data.manifest_id;
  prov["feature_hash"] = features.config.Hash();
  prov["timbre_hash"] = timbre.Hash();
  prov["flow_hash"] = flow.Hash();
  prov["seeds"] = opts.seeds;
  std::vector<ResultRow> done;
  auto rows = RunAblation(flow, data, opts, [&](const ResultRow &row) {
    done.push_back(row);
    EmitReport(done, prov, out);
    if (row.Failed())
      EMO_WARN("system " << row.system_no << " failed");
    else if (row.repeat_uars.size() > 1)
      EMO_LOG("system " << row.system_no << " [" << row.tag << "] UAR " << row.uar << " (range "
              << *std::min_element(row.repeat_uars.begin(), row.repeat_uars.end()) << " to "
              << *std::max_element(row.repeat_uars.begin(), row.repeat_uars.end()) << ")");
    else
      EMO_LOG("system " << row.system_no << " [" << row.tag << "] UAR " << row.uar);
  });
  int failed = 0;
  for (const auto &r : rows) failed += r.Failed();
  if (failed) {
    EMO_WARN(failed << " of " << rows.size() << " systems failed; partial results are in " << a.out);
    return kExitDomainError;
  }
  return kExitOk;
}

struct XevalArgs {
  std::string ser;
  std::string flow;
  std::string timbre;
  std::string test_manifest;
  std::string features;
  std::string mask;
  std::string test_name;
  std::string out;
};

void CmdXeval(const XevalArgs &a, const CommonOptions &common) {
  const RunConfig cfg = common.Load();
  CorpusManifest m = LoadManifest(a.test_manifest);
  bool any_test = false;
  for (const auto &r : m.records) any_test = any_test || r.split == Split::kTest;
  if (!any_test)
    for (auto &r : m.records) r.split = Split::kTest;
  const fs::path out(a.out);
  FeatureSet features = FeaturesFor(m, a.test_manifest, a.features, out / "features", cfg, common);
  std::string timbre_path = a.timbre;
  if (timbre_path.empty()) {
    const fs::path side = fs::path(a.flow).string() + ".json";
    if (!fs::exists(side)) EMO_ERR("flow sidecar " << side.string() << " not found; pass --timbre");
    timbre_path = ReadJsonFile(side).value("timbre_path", "");
    if (timbre_path.empty()) EMO_ERR("flow sidecar names no timbre model; pass --timbre");
  }
  TimbreModel timbre = LoadTimbreChecked(timbre_path, cfg, features.config.Hash(), common);
  Json flow_side, ser_side;
  SpeechFlowModel flow = LoadFlowChecked(a.flow, cfg, features.config.Hash(), timbre.Hash(), common,
                                         &flow_side);
  AcrnnModel ser = LoadAcrnn(a.ser, &ser_side);
  if (ser.MaskTag() != kRawTag)
    CheckHash("classifier " + a.ser + " flow", ser_side.value("flow_hash", ""), flow.Hash(), common);
  const std::string train_corpus = ser_side.value("corpus", flow_side.value("corpus", "train"));
  CorpusData data = BuildCorpusData(m, features, timbre, CorpusName(m, a.test_name));
  ResultRow row = CrossCorpusEval(ser, flow, data.test, train_corpus, data.name,
                                  a.mask.empty() ? std::nullopt : std::optional<std::string>(a.mask));
  Json prov = ConfigProvenance(cfg);
  prov["command"] = "xeval";
  prov["test_manifest_id"] = data.manifest_id;
  prov["feature_hash"] = features.config.Hash();
  EmitReport({row}, prov, out);
  EMO_LOG("system " << row.system_no << " [" << row.tag << "] " << train_corpus << " -> "
          << data.name << " UAR " << row.uar);
}

struct ReportArgs {
  std::vector<std::string> inputs;
  std::string out;
};

void CmdReport(const ReportArgs &a, const CommonOptions &common) {
  common.Load();
  std::vector<ResultRow> rows;
  Json sources = Json::array();
  for (const std::string &dir : a.inputs) {
    const fs::path report = fs::path(dir) / "report.json";
    std::vector<ResultRow> r = ReadReportRows(report);
    rows.insert(rows.end(), r.begin(), r.end());
    sources.push_back({{"report_hash", HashHexOfFile(report)}, {"rows", r.size()}});
  }
  EmitReport(rows, {{"command", "report"}, {"sources", sources}}, a.out);
  EMO_LOG("merged " << rows.size() << " rows into " << a.out);
}

}  // namespace

int RunEmoflowCli(int argc, const char *const *argv) {
  CLI::App app{"emoflow: factor decomposition of speech and emotion-recognition ablations"};
  app.require_subcommand(1);
  app.fallthrough();
  CommonOptions common;
  app.add_option("--config", common.config_path, "INI configuration file")->check(CLI::ExistingFile);
  app.add_option("--set", common.overrides, "Override a config value: section.key=value")
      ->allow_extra_args(false);
  app.add_option("--seed", common.seed, "Global seed")->type_name("UINT");
  app.add_flag("--force", common.force, "Use artifacts whose recorded hashes differ");
  app.add_option("-v,--verbose", common.verbose, "Log verbosity (0-2)");

  SynthArgs synth;
  auto *c_synth = app.add_subcommand("synth-toy", "Synthesize a factor-coded toy corpus");
  c_synth->add_option("--factor", synth.factor, "Coding factor: rhythm, pitch or content")
      ->check(CLI::IsMember({"rhythm", "pitch", "content"}));
  c_synth->add_option("--speakers", synth.speakers, "Number of speakers");
  c_synth->add_option("--per-class", synth.per_class, "Utterances per speaker and class");
  c_synth->add_option("--duration", synth.duration, "Utterance duration in seconds");
  c_synth->add_option("--corpus", synth.corpus, "Corpus name");
  c_synth->add_option("--out", synth.out, "Output directory")->required();

  PrepareArgs prep;
  auto *c_prep = app.add_subcommand("prepare", "Standardize audio and assign speaker-disjoint splits");
  c_prep->add_option("--manifest", prep.manifest, "Input manifest")->required()->check(CLI::ExistingFile);
  c_prep->add_option("--ratios", prep.ratios, "Train,valid,test ratios, e.g. 0.8,0.1,0.1");
  c_prep->add_option("--labels", prep.labels, "Raw labels, one 'id<TAB>label' per line")
      ->check(CLI::ExistingFile);
  c_prep->add_option("--scheme", prep.scheme, "Label scheme for --labels");
  c_prep->add_option("--merge", prep.merges, "Label merge spec, e.g. iemocap:exc=H");
  c_prep->add_option("--out", prep.out, "Output directory")->required();

  FeaturizeArgs feat;
  auto *c_feat = app.add_subcommand("featurize", "Compute log-mel and pitch features");
  c_feat->add_option("--manifest", feat.manifest, "Manifest")->required()->check(CLI::ExistingFile);
  c_feat->add_option("--images", feat.images, "Render this many spectrogram images");
  c_feat->add_option("--out", feat.out, "Feature directory")->required();

  TrainTimbreArgs tt;
  auto *c_tt = app.add_subcommand("train-timbre", "Train the speaker encoder");
  c_tt->add_option("--manifest", tt.manifest, "Manifest")->required()->check(CLI::ExistingFile);
  c_tt->add_option("--features", tt.features, "Feature directory (computed when absent)");
  c_tt->add_option("--out", tt.out, "Model file")->required();

  TrainFlowArgs tf;
  auto *c_tf = app.add_subcommand("train-flow", "Train the factor autoencoder");
  c_tf->add_option("--manifest", tf.manifest, "Manifest with splits")->required()->check(CLI::ExistingFile);
  c_tf->add_option("--features", tf.features, "Feature directory")->required();
  c_tf->add_option("--timbre", tf.timbre, "Timbre model")->required();
  c_tf->add_option("--name", tf.name, "Corpus name");
  c_tf->add_option("--out", tf.out, "Model file")->required();

  ReconstructArgs rc;
  auto *c_rc = app.add_subcommand("reconstruct", "Reconstruct a corpus with factors removed");
  c_rc->add_option("--flow", rc.flow, "Flow model")->required();
  c_rc->add_option("--timbre", rc.timbre, "Timbre model")->required();
  c_rc->add_option("--manifest", rc.manifest, "Manifest with splits")->required()->check(CLI::ExistingFile);
  c_rc->add_option("--features", rc.features, "Feature directory")->required();
  c_rc->add_option("--mask", rc.mask, "Mask tag such as CRP, CR-, -R- or raw");
  c_rc->add_option("--images", rc.images, "Render this many reconstructed spectrograms");
  c_rc->add_option("--out", rc.out, "Dataset directory")->required();

  TrainSerArgs ts;
  auto *c_ts = app.add_subcommand("train-ser", "Train the emotion classifier on one dataset");
  c_ts->add_option("--dataset", ts.dataset, "Dataset directory from reconstruct")->required();
  c_ts->add_option("--mask-tag", ts.mask_tag, "Expected mask tag of the dataset")->required();
  c_ts->add_option("--out", ts.out, "Model file")->required();

  AblateArgs ab;
  auto *c_ab = app.add_subcommand("ablate", "Run the nine-system ablation");
  c_ab->add_option("--flow", ab.flow, "Flow model")->required();
  c_ab->add_option("--timbre", ab.timbre, "Timbre model")->required();
  c_ab->add_option("--manifest", ab.manifest, "Manifest with splits")->required()->check(CLI::ExistingFile);
  c_ab->add_option("--features", ab.features, "Feature directory (computed when absent)");
  c_ab->add_option("--seeds", ab.seeds, "File of classifier seeds, one repeat each")
      ->check(CLI::ExistingFile);
  c_ab->add_option("--repeats", ab.repeats, "Classifier trainings per system (first N seeds of --seeds)");
  c_ab->add_option("--systems", ab.systems, "Subset of system numbers")->delimiter(',');
  c_ab->add_option("--name", ab.name, "Corpus name");
  c_ab->add_option("--out", ab.out, "Results directory")->required();

  XevalArgs xe;
  auto *c_xe = app.add_subcommand("xeval", "Score a classifier on another corpus");
  c_xe->add_option("--ser", xe.ser, "Classifier model")->required();
  c_xe->add_option("--flow", xe.flow, "Training-side flow model")->required();
  c_xe->add_option("--timbre", xe.timbre, "Timbre model (default: the one the flow was trained with)");
  c_xe->add_option("--test-manifest", xe.test_manifest, "Test corpus manifest")
      ->required()
      ->check(CLI::ExistingFile);
  c_xe->add_option("--features", xe.features, "Test feature directory (computed when absent)");
  c_xe->add_option("--mask", xe.mask, "Expected mask tag of the classifier");
  c_xe->add_option("--test-name", xe.test_name, "Test corpus name");
  c_xe->add_option("--out", xe.out, "Results directory")->required();

  ReportArgs rp;
  auto *c_rp = app.add_subcommand("report", "Merge result directories into one report");
  c_rp->add_option("--inputs", rp.inputs, "Result directories")->required();
  c_rp->add_option("--out", rp.out, "Report directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsageError;
  }
  SetVerboseLevel(common.verbose);
  try {
    if (c_synth->parsed()) CmdSynthToy(synth, common);
    else if (c_prep->parsed()) CmdPrepare(prep, common);
    else if (c_feat->parsed()) CmdFeaturize(feat, common);
    else if (c_tt->parsed()) CmdTrainTimbre(tt, common);
    else if (c_tf->parsed()) CmdTrainFlow(tf, common);
    else if (c_rc->parsed()) CmdReconstruct(rc, common);
    else if (c_ts->parsed()) CmdTrainSer(ts, common);
    else if (c_ab->parsed()) return CmdAblate(ab, common);
    else if (c_xe->parsed()) CmdXeval(xe, common);
    else if (c_rp->parsed()) CmdReport(rp, common);
  } catch (const UsageError &e) {
    std::cerr << "ERROR (usage) " << e.what() << std::endl;
    return kExitUsageError;
  } catch (const std::exception &e) {
    std::cerr << "ERROR (emoflow) " << e.what() << std::endl;
    return kExitDomainError;
  }
  return kExitOk;
}

}  // namespace emoflow
