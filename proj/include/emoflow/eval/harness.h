// include/emoflow/eval/harness.h

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

#ifndef EMOFLOW_EVAL_HARNESS_H_
#define EMOFLOW_EVAL_HARNESS_H_

#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "emoflow/base/io.h"
#include "emoflow/eval/metrics.h"
#include "emoflow/feat/feature-cache.h"
#include "emoflow/flow/speechflow.h"
#include "emoflow/ingest/manifest.h"
#include "emoflow/ser/acrnn.h"
#include "emoflow/timbre/timbre-encoder.h"

namespace emoflow {

/// Tag of the baseline trained on original spectrograms.
inline constexpr const char *kRawTag = "raw";

struct AblationSystem {
  int system_no = 0;
  bool raw = false;  // original spectrograms; the mask is unused
  FactorMask mask;
  /// "raw" for the baseline, the mask tag otherwise.
  std::string Tag() const { return raw ? kRawTag : mask.Tag(); }
};

/// The nine configurations: raw, CRP, ---, C--, -R-, --P, CR-, C-P, -RP.
std::vector<AblationSystem> EnumerateSystems();
/// Lookup by tag ("raw" or a mask tag); throws for unknown tags.
AblationSystem SystemForTag(const std::string &tag);

// One split of a corpus with everything the flow and the classifier need.
struct CorpusSplit {
  std::vector<FlowExample> examples;
  std::vector<int> labels;  // class index per example
};

struct CorpusData {
  std::string name;
  std::string manifest_id;
  CorpusSplit train, valid, test;
};

/// Builds the encoder inputs (speaker-normalized pitch) and timbre
/// vectors of every labeled record.  Unassigned records are skipped.
CorpusData BuildCorpusData(const CorpusManifest &manifest, const FeatureSet &features,
                           const TimbreModel &timbre, const std::string &name);

/// The classifier dataset of one system: original mels for the baseline,
/// reconstructions under the system's mask otherwise.
std::vector<SerExample> SystemDataset(const CorpusSplit &split, const AblationSystem &system,
                                      const SpeechFlowModel &flow);

struct ResultRow {
  int system_no = 0;
  std::string tag;
  std::string train_corpus, test_corpus;
  double uar = 0.0;  // mean over repeats
  std::vector<double> repeat_uars;
  ConfusionMatrix confusion;  // summed over repeats
  std::vector<uint64_t> seeds;
  std::vector<std::string> ser_hashes;
  std::string flow_hash;
  std::vector<double> valid_uars;
  std::string error;  // non-empty when the system failed

  bool Failed() const { return !error.empty(); }
  Json ToJson() const;
};

struct AblationOptions {
  AcrnnConfig acrnn;
  /// One classifier training per seed; results are averaged.
  std::vector<uint64_t> seeds = {0};
  /// Subset of system numbers to run; empty means all nine.
  std::vector<int> systems;
  /// When set, each system's first classifier is saved here as
  /// system<k>.bin.
  std::optional<std::filesystem::path> model_dir;
};

/// Per-training seed of one system and repeat.
uint64_t SystemSeed(uint64_t base, int system_no);

using RowCallback = std::function<void(const ResultRow &)>;

// Trains and scores each system on its own reconstructions of the corpus.
// A failing system yields a row with `error` set; the others still run.
std::vector<ResultRow> RunAblation(const SpeechFlowModel &flow, const CorpusData &corpus,
                                   const AblationOptions &opts,
                                   const RowCallback &on_row = nullptr);

// Scores a classifier on another corpus's test split, reconstructed with
// the training side's flow under the classifier's mask.  Throws if
// `expected_tag` is given and differs from the classifier's tag.
ResultRow CrossCorpusEval(const AcrnnModel &ser, const SpeechFlowModel &flow,
                          const CorpusSplit &test, const std::string &train_corpus,
                          const std::string &test_corpus,
                          const std::optional<std::string> &expected_tag = std::nullopt);

inline constexpr int kReportSchemaVersion = 1;

// results.csv, confusion/<name>.csv and .png per row (fixed 0-100 scale)
// and report.json holding every row plus `provenance`.
void EmitReport(const std::vector<ResultRow> &rows, const Json &provenance,
                const std::filesystem::path &out_dir);

/// Reads the rows back from report.json.
std::vector<ResultRow> ReadReportRows(const std::filesystem::path &report_json);

/// "a,b,c" lines of results.csv with a header; failed rows are omitted.
std::string ResultsCsv(const std::vector<ResultRow> &rows);

}  // namespace emoflow

#endif  // EMOFLOW_EVAL_HARNESS_H_
