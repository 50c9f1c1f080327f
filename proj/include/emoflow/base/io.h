// include/emoflow/base/io.h

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

#ifndef EMOFLOW_BASE_IO_H_
#define EMOFLOW_BASE_IO_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "emoflow/base/types.h"
#include "json.hpp"

namespace emoflow {

using Json = nlohmann::json;

std::string ReadTextFile(const std::filesystem::path &path);
void WriteTextFile(const std::filesystem::path &path, std::string_view text);
Json ReadJsonFile(const std::filesystem::path &path);
/// Pretty-printed with sorted keys, so equal objects give equal bytes.
void WriteJsonFile(const std::filesystem::path &path, const Json &j);

/// Creates the directory (and parents); errors if that is impossible.
void EnsureDirectory(const std::filesystem::path &dir);

/// 16 lowercase hex digits of FNV-1a-64.
std::string HashHex(std::string_view data);
std::string HashHexOfFile(const std::filesystem::path &path);
/// Hash of the canonical (sorted, compact) dump of j.
std::string HashJson(const Json &j);

// Little-endian binary primitives shared by the artifact formats.
void WriteU64(std::ostream &os, uint64_t v);
uint64_t ReadU64(std::istream &is);
void WriteString(std::ostream &os, const std::string &s);
std::string ReadString(std::istream &is);
void WriteMatrix(std::ostream &os, const Matrix &m);
Matrix ReadMatrix(std::istream &is);
void WriteDoubles(std::ostream &os, const std::vector<double> &v);
std::vector<double> ReadDoubles(std::istream &is);

}  // namespace emoflow

#endif  // EMOFLOW_BASE_IO_H_
