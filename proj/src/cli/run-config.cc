// src/cli/run-config.cc

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

#include "emoflow/cli/run-config.h"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "emoflow/base/error.h"
#include "emoflow/base/random.h"

namespace emoflow {

namespace {

Json WithoutSeed(Json j) {
  j.erase("seed");
  return j;
}

void SetValue(Json *section, const std::string &section_name, const std::string &key,
              const std::string &value) {
  Json *node = section;
  size_t start = 0;
  while (true) {
    const size_t dot = key.find('.', start);
    const std::string part = key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (!node->is_object() || !node->contains(part))
      EMO_USAGE_ERR("unknown config key '" << section_name << "." << key << "'");
    node = &(*node)[part];
    if (dot == std::string::npos) break;
    start = dot + 1;
  }
  if (node->is_object()) EMO_USAGE_ERR("config key '" << section_name << "." << key << "' is a group");
  try {
    size_t used = 0;
    if (node->is_boolean()) {
      if (value == "true" || value == "1") *node = true;
      else if (value == "false" || value == "0") *node = false;
      else throw std::invalid_argument(value);
      used = value.size();
    } else if (node->is_number_unsigned()) {
      if (!value.empty() && value[0] == '-') throw std::invalid_argument(value);
      *node = std::stoull(value, &used);
    } else if (node->is_number_integer()) {
      *node = std::stoll(value, &used);
    } else if (node->is_number_float()) {
      *node = std::stod(value, &used);
    } else {
      *node = value;
      used = value.size();
    }
    if (used != value.size()) throw std::invalid_argument(value);
  } catch (const std::logic_error &) {
    EMO_USAGE_ERR("bad value '" << value << "' for config key '" << section_name << "." << key << "'");
  }
}

Json SplitJson(const SplitRatios &s) {
  return {{"train", s.train}, {"valid", s.valid}, {"test", s.test}};
}

}  // namespace

const std::vector<std::string> &ConfigSections() {
  static const std::vector<std::string> s = {"feat", "timbre", "flow", "acrnn", "run"};
  return s;
}

uint64_t StageSeed(uint64_t global_seed, const std::string &stage) {
  return DeriveSeed(global_seed, "stage/" + stage);
}

Json RunConfig::SectionJson(const std::string &section) const {
  if (section == "feat") return feat.ToJson();
  if (section == "timbre") return WithoutSeed(timbre.ToJson());
  if (section == "flow") return WithoutSeed(flow.ToJson());
  if (section == "acrnn") return WithoutSeed(acrnn.ToJson());
  if (section == "run") return {{"seed", seed}, {"split", SplitJson(split)}};
  EMO_USAGE_ERR("unknown config section '" << section << "'");
}

std::string RunConfig::SectionHash(const std::string &section) const {
  return HashJson(SectionJson(section));
}

Json RunConfig::ToJson() const {
  Json j;
  for (const std::string &s : ConfigSections()) j[s] = SectionJson(s);
  return j;
}

RunConfig LoadRunConfig(const std::optional<std::filesystem::path> &path,
                        const std::vector<std::string> &overrides, std::optional<uint64_t> seed) {
  RunConfig defaults;
  Json j = defaults.ToJson();
  auto apply = [&](const std::string &section, const std::string &key, const std::string &value) {
    if (!j.contains(section)) EMO_USAGE_ERR("unknown config section '" << section << "'");
    SetValue(&j[section], section, key, value);
  };
  if (path) {
    if (!std::filesystem::exists(*path)) EMO_USAGE_ERR("config file " << path->string() << " not found");
    boost::property_tree::ptree tree;
    try {
      boost::property_tree::ini_parser::read_ini(path->string(), tree);
    } catch (const boost::property_tree::ini_parser_error &e) {
      EMO_USAGE_ERR("cannot parse config " << path->string() << ": " << e.message() << " at line "
                    << e.line());
    }
    for (const auto &[section, body] : tree) {
      if (body.empty())
        EMO_USAGE_ERR("config key '" << section << "' in " << path->string() << " is outside a section");
      for (const auto &[key, value] : body) apply(section, key, value.data());
    }
  }
  for (const std::string &o : overrides) {
    const size_t eq = o.find('='), dot = o.find('.');
    if (eq == std::string::npos || dot == std::string::npos || dot > eq)
      EMO_USAGE_ERR("override '" << o << "' must look like section.key=value");
    apply(o.substr(0, dot), o.substr(dot + 1, eq - dot - 1), o.substr(eq + 1));
  }

  RunConfig c;
  c.feat = FeatureConfig::FromJson(j["feat"]);
  j["timbre"]["seed"] = 0;
  j["flow"]["seed"] = 0;
  j["acrnn"]["seed"] = 0;
  c.timbre = TimbreConfig::FromJson(j["timbre"]);
  c.flow = SpeechFlowConfig::FromJson(j["flow"]);
  c.acrnn = AcrnnConfig::FromJson(j["acrnn"]);
  const Json &split = j["run"]["split"];
  c.split = SplitRatios{split.at("train"), split.at("valid"), split.at("test")};
  c.seed = seed ? *seed : j["run"]["seed"].get<uint64_t>();
  c.timbre.seed = StageSeed(c.seed, "timbre");
  c.flow.seed = StageSeed(c.seed, "flow");
  c.acrnn.seed = StageSeed(c.seed, "acrnn");
  try {
    c.flow.Check();
    c.acrnn.Check();
    c.flow.rr.Check();
  } catch (const Error &e) {
    EMO_USAGE_ERR("invalid configuration: " << e.what());
  }
  return c;
}

}  // namespace emoflow
