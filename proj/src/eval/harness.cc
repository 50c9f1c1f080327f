// src/eval/harness.cc

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

#include "emoflow/eval/harness.h"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>

#include "emoflow/base/error.h"
#include "emoflow/base/random.h"
#include "emoflow/feat/spectrogram-image.h"

namespace emoflow {

std::vector<AblationSystem> EnumerateSystems() {
  const char *tags[] = {"CRP", "---", "C--", "-R-", "--P", "CR-", "C-P", "-RP"};
  std::vector<AblationSystem> out;
  out.push_back({1, true, FactorMask::All()});
  for (int k = 0; k < 8; ++k) out.push_back({k + 2, false, FactorMask::FromTag(tags[k])});
  return out;
}

AblationSystem SystemForTag(const std::string &tag) {
  for (const AblationSystem &s : EnumerateSystems())
    if (s.Tag() == tag) return s;
  EMO_ERR("unknown system tag '" << tag << "'");
}

CorpusData BuildCorpusData(const CorpusManifest &manifest, const FeatureSet &features,
                           const TimbreModel &timbre, const std::string &name) {
  features.CheckCovers(manifest);
  CorpusData d;
  d.name = name;
  d.manifest_id = ManifestHash(manifest);
  for (const UtteranceRecord &r : manifest.records) {
    if (!r.label || r.split == Split::kUnassigned) continue;
    const UtteranceFeatures &u = features.Get(r.id);
    FlowExample ex;
    ex.id = r.id;
    ex.inputs = EncoderInputs{u.mel.frames, u.mel.frames, features.NormalizedPitch(r.id)};
    ex.z_t = timbre.Embed(u.mel.frames);
    CorpusSplit &s = r.split == Split::kTrain ? d.train : r.split == Split::kValid ? d.valid : d.test;
    s.examples.push_back(std::move(ex));
    s.labels.push_back(EmotionIndex(*r.label));
  }
  return d;
}

std::vector<SerExample> SystemDataset(const CorpusSplit &split, const AblationSystem &system,
                                      const SpeechFlowModel &flow) {
  std::vector<SerExample> out;
  out.reserve(split.examples.size());
  const std::string tag = system.Tag();
  for (size_t i = 0; i < split.examples.size(); ++i) {
    const FlowExample &ex = split.examples[i];
    Matrix mel = system.raw ? ex.inputs.rhythm
                            : flow.Reconstruct(MaskInputs(ex.inputs, system.mask), ex.z_t);
    out.push_back({ex.id, std::move(mel), split.labels[i], tag});
  }
  return out;
}

Json ResultRow::ToJson() const {
  Json counts = Json::array();
  for (const auto &row : confusion.counts) counts.push_back(row);
  Json seed_list = Json::array();
  for (uint64_t s : seeds) seed_list.push_back(s);
  Json range = Json::array();
  if (!repeat_uars.empty())
    range = {*std::min_element(repeat_uars.begin(), repeat_uars.end()),
             *std::max_element(repeat_uars.begin(), repeat_uars.end())};
  return {{"system_no", system_no},     {"tag", tag},
          {"uar_range", range},
          {"train_corpus", train_corpus}, {"test_corpus", test_corpus},
          {"uar", uar},                 {"repeat_uars", repeat_uars},
          {"confusion_counts", counts}, {"seeds", seed_list},
          {"ser_hashes", ser_hashes},   {"flow_hash", flow_hash},
          {"valid_uars", valid_uars},   {"error", error}};
}

namespace {

ResultRow RowFromJson(const Json &j) {
  ResultRow r;
  r.system_no = j.at("system_no");
  r.tag = j.at("tag");
  r.train_corpus = j.at("train_corpus");
  r.test_corpus = j.at("test_corpus");
  r.uar = j.at("uar");
  r.repeat_uars = j.at("repeat_uars").get<std::vector<double>>();
  const Json &c = j.at("confusion_counts");
  for (int i = 0; i < kNumEmotions; ++i)
    for (int k = 0; k < kNumEmotions; ++k) r.confusion.counts[i][k] = c.at(i).at(k);
  r.seeds = j.at("seeds").get<std::vector<uint64_t>>();
  r.ser_hashes = j.at("ser_hashes").get<std::vector<std::string>>();
  r.flow_hash = j.at("flow_hash");
  r.valid_uars = j.at("valid_uars").get<std::vector<double>>();
  r.error = j.at("error");
  return r;
}

void AddConfusion(const ConfusionMatrix &c, ConfusionMatrix *sum) {
  for (int i = 0; i < kNumEmotions; ++i)
    for (int k = 0; k < kNumEmotions; ++k) sum->counts[i][k] += c.counts[i][k];
}

std::string RowName(const ResultRow &r) {
  std::string s = "system" + std::to_string(r.system_no) + "_" + r.train_corpus + "_" + r.test_corpus;
  for (char &c : s)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '-') c = '_';
  return s;
}

std::string FormatDouble(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  return buf;
}

}  // namespace

uint64_t SystemSeed(uint64_t base, int system_no) {
  return DeriveSeed(base, "ablate/system" + std::to_string(system_no));
}

std::vector<ResultRow> RunAblation(const SpeechFlowModel &flow, const CorpusData &corpus,
                                   const AblationOptions &opts, const RowCallback &on_row) {
  if (opts.seeds.empty()) EMO_ERR("ablation needs at least one seed");
  if (corpus.train.examples.empty() || corpus.test.examples.empty())
    EMO_ERR("corpus " << corpus.name << " lacks train or test data");
  const std::string flow_hash = flow.Hash();
  std::vector<ResultRow> rows;
  for (const AblationSystem &system : EnumerateSystems()) {
    if (!opts.systems.empty() &&
        std::find(opts.systems.begin(), opts.systems.end(), system.system_no) == opts.systems.end())
      continue;
    ResultRow row;
    row.system_no = system.system_no;
    row.tag = system.Tag();
    row.train_corpus = row.test_corpus = corpus.name;
    row.flow_hash = flow_hash;
    try {
      std::vector<SerExample> train = SystemDataset(corpus.train, system, flow);
      std::vector<SerExample> valid = SystemDataset(corpus.valid, system, flow);
      std::vector<SerExample> test = SystemDataset(corpus.test, system, flow);
      double sum = 0.0;
      for (size_t r = 0; r < opts.seeds.size(); ++r) {
        AcrnnConfig config = opts.acrnn;
        config.seed = SystemSeed(opts.seeds[r], system.system_no);
        AcrnnTrainLog log;
        AcrnnModel model = TrainAcrnn(train, valid, config, row.tag, &log);
        std::vector<int> preds = PredictAcrnn(model, test);
        const double uar = Uar(preds, corpus.test.labels);
        AddConfusion(ComputeConfusion(preds, corpus.test.labels), &row.confusion);
        row.repeat_uars.push_back(uar);
        row.seeds.push_back(config.seed);
        row.ser_hashes.push_back(model.Hash());
        row.valid_uars.push_back(log.best_valid_uar);
        sum += uar;
        if (r == 0 && opts.model_dir) {
          Json prov = {{"corpus", corpus.name},
                       {"training_manifest_id", corpus.manifest_id},
                       {"flow_hash", flow_hash},
                       {"system_no", system.system_no},
                       {"valid_uar", log.best_valid_uar},
                       {"best_step", log.best_step}};
          SaveAcrnn(model, prov, *opts.model_dir / ("system" + std::to_string(system.system_no) + ".bin"));
        }
        EMO_VLOG(1, "system " << system.system_no << " [" << row.tag << "] seed " << config.seed
                 << " UAR " << uar);
      }
      row.uar = sum / opts.seeds.size();
    } catch (const std::exception &e) {
      row.error = e.what();
      EMO_WARN("system " << system.system_no << " failed: " << e.what());
    }
    if (on_row) on_row(row);
    rows.push_back(std::move(row));
  }
  return rows;
}

ResultRow CrossCorpusEval(const AcrnnModel &ser, const SpeechFlowModel &flow,
                          const CorpusSplit &test, const std::string &train_corpus,
                          const std::string &test_corpus,
                          const std::optional<std::string> &expected_tag) {
  if (expected_tag && *expected_tag != ser.MaskTag())
    EMO_ERR("classifier was trained under '" << ser.MaskTag() << "' but '" << *expected_tag
            << "' was requested");
  if (test.examples.empty()) EMO_ERR("cross-corpus test split of " << test_corpus << " is empty");
  const AblationSystem system = SystemForTag(ser.MaskTag());
  std::vector<int> preds = PredictAcrnn(ser, SystemDataset(test, system, flow));
  ResultRow row;
  row.system_no = system.system_no;
  row.tag = system.Tag();
  row.train_corpus = train_corpus;
  row.test_corpus = test_corpus;
  row.uar = Uar(preds, test.labels);
  row.repeat_uars = {row.uar};
  row.confusion = ComputeConfusion(preds, test.labels);
  row.seeds = {ser.Config().seed};
  row.ser_hashes = {ser.Hash()};
  row.flow_hash = flow.Hash();
  return row;
}

std::string ResultsCsv(const std::vector<ResultRow> &rows) {
  std::string out = "system_no,content,rhythm,pitch,train_corpus,test_corpus,uar\n";
  for (const ResultRow &r : rows) {
    if (r.Failed()) continue;
    std::string c = "na", rh = "na", p = "na";
    if (r.tag != kRawTag) {
      FactorMask m = FactorMask::FromTag(r.tag);
      c = m.content ? "1" : "0";
      rh = m.rhythm ? "1" : "0";
      p = m.pitch ? "1" : "0";
    }
    out += std::to_string(r.system_no) + "," + c + "," + rh + "," + p + "," + r.train_corpus + "," +
           r.test_corpus + "," + FormatDouble(r.uar) + "\n";
  }
  return out;
}

void EmitReport(const std::vector<ResultRow> &rows, const Json &provenance,
                const std::filesystem::path &out_dir) {
  if (rows.empty()) EMO_ERR("no result rows to report");
  EnsureDirectory(out_dir / "confusion");
  WriteTextFile(out_dir / "results.csv", ResultsCsv(rows));
  const char codes[] = {'A', 'H', 'S', 'N'};
  Json row_json = Json::array(), failures = Json::array();
  for (const ResultRow &r : rows) {
    row_json.push_back(r.ToJson());
    if (r.Failed()) {
      failures.push_back({{"system_no", r.system_no}, {"error", r.error}});
      continue;
    }
    Matrix norm = r.confusion.Normalized();
    std::string csv = "truth\\pred,A,H,S,N\n";
    for (int i = 0; i < kNumEmotions; ++i) {
      csv += codes[i];
      for (int k = 0; k < kNumEmotions; ++k) csv += "," + FormatDouble(norm(i, k));
      csv += "\n";
    }
    const std::string name = RowName(r);
    WriteTextFile(out_dir / "confusion" / (name + ".csv"), csv);
    WriteHeatmapPng(norm, ColorScale{0.0, 100.0}, 16, out_dir / "confusion" / (name + ".png"),
                    name + " (" + r.tag + ")");
  }
  Json report = {{"schema_version", kReportSchemaVersion},
                 {"rows", row_json},
                 {"failures", failures},
                 {"provenance", provenance}};
  WriteJsonFile(out_dir / "report.json", report);
}

std::vector<ResultRow> ReadReportRows(const std::filesystem::path &report_json) {
  Json j = ReadJsonFile(report_json);
  if (j.value("schema_version", 0) != kReportSchemaVersion)
    EMO_ERR(report_json.string() << " has unsupported schema version "
            << j.value("schema_version", 0));
  std::vector<ResultRow> rows;
  for (const Json &r : j.at("rows")) rows.push_back(RowFromJson(r));
  return rows;
}

}  // namespace emoflow
