// tests/unit/cli-test.cc

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

#include <filesystem>
#include <string>
#include <vector>

#include "emoflow/base/error.h"
#include "emoflow/base/io.h"
#include "emoflow/base/random.h"
#include "emoflow/cli/commands.h"
#include "emoflow/cli/run-config.h"
#include "emoflow/ingest/manifest.h"

namespace emoflow {
namespace {

namespace fs = std::filesystem;

fs::path TempDir(const std::string &name) {
  fs::path p = fs::temp_directory_path() / ("emoflow-cli-" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

int RunCli(std::vector<std::string> args) {
  args.insert(args.begin(), "emoflow");
  std::vector<const char *> argv;
  for (const std::string &a : args) argv.push_back(a.c_str());
  return RunEmoflowCli(static_cast<int>(argv.size()), argv.data());
}

TEST(RunConfigTest, DefaultsAndStageSeeds) {
  RunConfig c = LoadRunConfig(std::nullopt, {}, 11);
  EXPECT_EQ(c.seed, 11u);
  EXPECT_EQ(c.timbre.seed, DeriveSeed(11, "stage/timbre"));
  EXPECT_EQ(c.flow.seed, DeriveSeed(11, "stage/flow"));
  EXPECT_EQ(c.acrnn.seed, DeriveSeed(11, "stage/acrnn"));
  EXPECT_EQ(c.SectionHash("flow"), LoadRunConfig(std::nullopt, {}, 12).SectionHash("flow"));
  EXPECT_NE(c.SectionHash("run"), LoadRunConfig(std::nullopt, {}, 12).SectionHash("run"));
}

TEST(RunConfigTest, FileThenOverrides) {
  const fs::path dir = TempDir("ini");
  WriteTextFile(dir / "run.ini",
                "[flow]\nnum_steps = 17\nadam.learning_rate = 0.01\n"
                "[acrnn]\nrnn_hidden = 5\n[run]\nseed = 4\n");
  RunConfig c = LoadRunConfig(dir / "run.ini", {"flow.num_steps=23"});
  EXPECT_EQ(c.flow.num_steps, 23);
  EXPECT_DOUBLE_EQ(c.flow.adam.learning_rate, 0.01);
  EXPECT_EQ(c.acrnn.rnn_hidden, 5);
  EXPECT_EQ(c.seed, 4u);
  EXPECT_EQ(LoadRunConfig(dir / "run.ini", {}, 9).seed, 9u);
  RunConfig d;
  EXPECT_NE(c.SectionHash("flow"), d.SectionHash("flow"));
  EXPECT_EQ(c.SectionHash("feat"), d.SectionHash("feat"));
  fs::remove_all(dir);
}

TEST(RunConfigTest, RejectsUnknownAndIllTyped) {
  EXPECT_THROW(LoadRunConfig(std::nullopt, {"nosuch.key=1"}), UsageError);
  EXPECT_THROW(LoadRunConfig(std::nullopt, {"flow.nosuch=1"}), UsageError);
  EXPECT_THROW(LoadRunConfig(std::nullopt, {"flow.num_steps=ten"}), UsageError);
  EXPECT_THROW(LoadRunConfig(std::nullopt, {"flow.num_steps=1.5"}), UsageError);
  EXPECT_THROW(LoadRunConfig(std::nullopt, {"flow.adam=1"}), UsageError);
  EXPECT_THROW(LoadRunConfig(std::nullopt, {"flow.num_steps"}), UsageError);
  EXPECT_THROW(LoadRunConfig(std::nullopt, {"flow.d_c=0"}), UsageError);
  EXPECT_THROW(LoadRunConfig(fs::path("/nonexistent/run.ini"), {}), UsageError);
}

TEST(CliTest, HelpAndUsageExitCodes) {
  EXPECT_EQ(RunCli({"--help"}), kExitOk);
  EXPECT_EQ(RunCli({"ablate", "--help"}), kExitOk);
  EXPECT_EQ(RunCli({}), kExitUsageError);
  EXPECT_EQ(RunCli({"frobnicate"}), kExitUsageError);
  EXPECT_EQ(RunCli({"synth-toy"}), kExitUsageError);
  EXPECT_EQ(RunCli({"synth-toy", "--factor", "volume", "--out", "/tmp/x"}), kExitUsageError);
  EXPECT_EQ(RunCli({"--set", "flow.nosuch=1", "synth-toy", "--out", "/tmp/x"}), kExitUsageError);
}

TEST(CliTest, DomainErrorsExitOne) {
  const fs::path dir = TempDir("domain");
  WriteTextFile(dir / "manifest.jsonl",
                R"({"id":"u1","speaker_id":"s1","label":"A","audio_path":"missing.wav","duration":1.0,"corpus":"c","split":"train"})"
                "\n");
  EXPECT_EQ(RunCli({"featurize", "--manifest", (dir / "manifest.jsonl").string(), "--out",
                 (dir / "feat").string()}),
            kExitDomainError);
  fs::remove_all(dir);
}

TEST(CliTest, SmallPipelineAndHashRefusal) {
  const fs::path dir = TempDir("pipeline");
  const std::string corpus = (dir / "corpus").string();
  ASSERT_EQ(RunCli({"--seed", "3", "synth-toy", "--factor", "rhythm", "--speakers", "8", "--per-class",
                 "8", "--duration", "0.5", "--out", corpus}),
            kExitOk);
  const std::string manifest = corpus + "/manifest.jsonl";
  ASSERT_TRUE(fs::exists(manifest));
  EXPECT_EQ(LoadManifest(manifest).records.size(), 8u * 4u * 8u);

  const std::string prepared = (dir / "prepared").string();
  ASSERT_EQ(RunCli({"--seed", "3", "prepare", "--manifest", manifest, "--ratios", "0.5,0.25,0.25",
                 "--out", prepared}),
            kExitOk);
  CorpusManifest split = LoadManifest(prepared + "/manifest.jsonl");
  EXPECT_EQ(split.Subset(Split::kTrain).Speakers().size(), 4u);
  EXPECT_EQ(split.Subset(Split::kTest).Speakers().size(), 2u);

  const std::string feats = (dir / "feat").string();
  ASSERT_EQ(RunCli({"featurize", "--manifest", manifest, "--out", feats}), kExitOk);
  const std::string timbre = (dir / "timbre.bin").string();
  ASSERT_EQ(RunCli({"--set", "timbre.num_steps=3", "train-timbre", "--manifest", manifest,
                 "--features", feats, "--out", timbre}),
            kExitOk);
  EXPECT_TRUE(fs::exists(timbre + ".json"));

  // Features computed under another configuration are refused, unless forced.
  const std::vector<std::string> changed = {"--set", "feat.pitch.threshold=0.25", "--set",
                                            "timbre.num_steps=3"};
  std::vector<std::string> args = changed;
  for (const char *a : {"train-timbre", "--manifest"}) args.push_back(a);
  args.insert(args.end(), {manifest, "--features", feats, "--out", (dir / "t2.bin").string()});
  EXPECT_EQ(RunCli(args), kExitDomainError);
  EXPECT_FALSE(fs::exists(dir / "t2.bin"));
  args.insert(args.begin(), "--force");
  EXPECT_EQ(RunCli(args), kExitOk);

  const std::string pm = prepared + "/manifest.jsonl", pf = (dir / "pfeat").string();
  const std::string ini = (dir / "tiny.ini").string();
  WriteTextFile(ini, "[timbre]\nnum_steps = 3\n[flow]\nnum_steps = 3\n[acrnn]\nnum_steps = 2\n");
  ASSERT_EQ(RunCli({"featurize", "--manifest", pm, "--out", pf}), kExitOk);
  const std::string pt = (dir / "pt.bin").string(), flow = (dir / "flow.bin").string();
  ASSERT_EQ(RunCli({"--config", ini, "train-timbre", "--manifest", pm, "--features", pf, "--out", pt}),
            kExitOk);
  ASSERT_EQ(RunCli({"--config", ini, "train-flow", "--manifest", pm, "--features", pf,
                    "--timbre", pt, "--out", flow}),
            kExitOk);
  // The flow records the timbre configuration it was trained against.
  EXPECT_EQ(RunCli({"--config", ini, "--set", "timbre.hidden=7", "train-flow", "--manifest", pm, "--features", pf,
                    "--timbre", pt, "--out", (dir / "f2.bin").string()}),
            kExitDomainError);

  const std::string data = (dir / "cr").string(), ser = (dir / "ser.bin").string();
  ASSERT_EQ(RunCli({"--config", ini, "reconstruct", "--flow", flow, "--timbre", pt,
                    "--manifest", pm, "--features", pf, "--mask", "CR-", "--out", data}),
            kExitOk);
  EXPECT_EQ(RunCli({"--config", ini, "reconstruct", "--flow", flow, "--timbre", pt,
                    "--manifest", pm, "--features", pf, "--mask", "CRX", "--out", data + "x"}),
            kExitUsageError);
  EXPECT_EQ(RunCli({"--config", ini, "train-ser", "--dataset", data, "--mask-tag", "CRP",
                    "--out", ser}),
            kExitDomainError);
  ASSERT_EQ(RunCli({"--config", ini, "train-ser", "--dataset", data, "--mask-tag", "CR-",
                    "--out", ser}),
            kExitOk);

  const std::string x = (dir / "x").string();
  ASSERT_EQ(RunCli({"--config", ini, "xeval", "--ser", ser, "--flow", flow,
                    "--test-manifest", pm, "--features", pf, "--mask", "CR-", "--out", x}),
            kExitOk);
  EXPECT_EQ(ReadTextFile(fs::path(x) / "results.csv").substr(0, 10), "system_no,");
  EXPECT_EQ(RunCli({"--config", ini, "xeval", "--ser", ser, "--flow", flow,
                    "--test-manifest", pm, "--features", pf, "--mask", "CRP", "--out", x + "2"}),
            kExitDomainError);

  const std::string ab = (dir / "ab").string();
  ASSERT_EQ(RunCli({"--config", ini, "ablate", "--flow",
                    flow, "--timbre", pt, "--manifest", pm, "--features", pf, "--systems", "1,3",
                    "--repeats", "2", "--out", ab}),
            kExitOk);
  Json report = ReadJsonFile(fs::path(ab) / "report.json");
  ASSERT_EQ(report.at("rows").size(), 2u);
  EXPECT_EQ(report.at("rows")[0].at("repeat_uars").size(), 2u);
  const std::string merged = (dir / "merged").string();
  ASSERT_EQ(RunCli({"--config", ini, "report", "--inputs", ab, x, "--out", merged}), kExitOk);
  EXPECT_EQ(ReadJsonFile(fs::path(merged) / "report.json").at("rows").size(), 3u);
  fs::remove_all(dir);
}

}  // namespace
}  // namespace emoflow
