// src/ingest/labels.cc

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

#include "emoflow/ingest/labels.h"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "emoflow/base/error.h"

namespace emoflow {

namespace {

std::string Lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

std::string Trim(const std::string &s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

// English names every scheme understands.
std::map<std::string, Emotion> CommonNames() {
  return {
      {"angry", Emotion::kAngry},     {"anger", Emotion::kAngry},
      {"happy", Emotion::kHappy},     {"happiness", Emotion::kHappy},
      {"sad", Emotion::kSad},         {"sadness", Emotion::kSad},
      {"neutral", Emotion::kNeutral},
  };
}

}  // namespace

LabelSchemeRegistry::LabelSchemeRegistry() {
  Register("default", {});
  Register("iemocap", {{"ang", Emotion::kAngry},
                       {"hap", Emotion::kHappy},
                       {"sad", Emotion::kSad},
                       {"neu", Emotion::kNeutral}});
  // SAVEE file prefixes: a, d, f, h, n, sa, su.
  Register("savee", {{"a", Emotion::kAngry},
                     {"h", Emotion::kHappy},
                     {"sa", Emotion::kSad},
                     {"n", Emotion::kNeutral}});
  Register("esdb", {});
  Register("toy", {{"a", Emotion::kAngry},
                   {"h", Emotion::kHappy},
                   {"s", Emotion::kSad},
                   {"n", Emotion::kNeutral}});
}

void LabelSchemeRegistry::Register(const std::string &scheme,
                                   const std::map<std::string, Emotion> &table) {
  auto &dst = schemes_[scheme];
  dst = CommonNames();
  for (const auto &[raw, e] : table) dst[Lower(raw)] = e;
}

void LabelSchemeRegistry::AddMerge(const std::string &scheme,
                                   const std::string &raw, Emotion e) {
  auto it = schemes_.find(scheme);
  if (it == schemes_.end()) EMO_ERR("unknown label scheme '" << scheme << "'");
  it->second[Lower(raw)] = e;
}

bool LabelSchemeRegistry::HasScheme(const std::string &scheme) const {
  return schemes_.count(scheme) > 0;
}

std::vector<std::string> LabelSchemeRegistry::Schemes() const {
  std::vector<std::string> out;
  for (const auto &kv : schemes_) out.push_back(kv.first);
  return out;
}

std::optional<Emotion> LabelSchemeRegistry::Map(const std::string &raw,
                                                const std::string &scheme) const {
  auto it = schemes_.find(scheme);
  if (it == schemes_.end()) EMO_ERR("unknown label scheme '" << scheme << "'");
  auto e = it->second.find(Lower(Trim(raw)));
  if (e == it->second.end()) return std::nullopt;
  return e->second;
}

void ApplyMergeSpec(const std::string &spec, LabelSchemeRegistry *registry) {
  size_t colon = spec.find(':');
  if (colon == std::string::npos)
    EMO_ERR("label merge spec '" << spec << "' must look like scheme:raw=X,...");
  std::string scheme = Trim(spec.substr(0, colon));
  std::stringstream ss(spec.substr(colon + 1));
  std::string item;
  while (std::getline(ss, item, ',')) {
    size_t eq = item.find('=');
    if (eq == std::string::npos) EMO_ERR("bad label merge entry '" << item << "'");
    auto e = EmotionFromCode(Trim(item.substr(eq + 1)));
    if (!e) EMO_ERR("label merge target must be A, H, S or N: '" << item << "'");
    registry->AddMerge(scheme, Trim(item.substr(0, eq)), *e);
  }
}

}  // namespace emoflow
