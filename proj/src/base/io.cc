// src/base/io.cc

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

#include "emoflow/base/io.h"

#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "emoflow/base/error.h"
#include "emoflow/base/random.h"

namespace emoflow {

namespace {
int g_verbose_level = 0;
}

int GetVerboseLevel() { return g_verbose_level; }
void SetVerboseLevel(int level) { g_verbose_level = level; }

std::string ReadTextFile(const std::filesystem::path &path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) EMO_ERR("cannot open " << path.string() << " for reading");
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

void WriteTextFile(const std::filesystem::path &path, std::string_view text) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) EMO_ERR("cannot open " << path.string() << " for writing");
  os.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!os) EMO_ERR("write failed: " << path.string());
}

Json ReadJsonFile(const std::filesystem::path &path) {
  std::string text = ReadTextFile(path);
  try {
    return Json::parse(text);
  } catch (const Json::parse_error &e) {
    EMO_ERR("malformed JSON in " << path.string() << ": " << e.what());
  }
}

void WriteJsonFile(const std::filesystem::path &path, const Json &j) {
  // nlohmann::json objects are std::map backed, so keys come out sorted.
  WriteTextFile(path, j.dump(2) + "\n");
}

void EnsureDirectory(const std::filesystem::path &dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir))
    EMO_ERR("cannot create directory " << dir.string() << ": " << ec.message());
}

std::string HashHex(std::string_view data) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(Fnv1a64(data)));
  return buf;
}

std::string HashHexOfFile(const std::filesystem::path &path) {
  return HashHex(ReadTextFile(path));
}

std::string HashJson(const Json &j) { return HashHex(j.dump()); }

void WriteU64(std::ostream &os, uint64_t v) {
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  os.write(reinterpret_cast<const char *>(b), 8);
}

uint64_t ReadU64(std::istream &is) {
  unsigned char b[8];
  is.read(reinterpret_cast<char *>(b), 8);
  if (!is) EMO_ERR("unexpected end of binary stream");
  uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(b[i]) << (8 * i);
  return v;
}

void WriteString(std::ostream &os, const std::string &s) {
  WriteU64(os, s.size());
  os.write(s.data(), static_cast<std::streamsize>(s.size()));
}

std::string ReadString(std::istream &is) {
  uint64_t n = ReadU64(is);
  if (n > (1ULL << 30)) EMO_ERR("implausible string length " << n);
  std::string s(n, '\0');
  is.read(s.data(), static_cast<std::streamsize>(n));
  if (!is) EMO_ERR("unexpected end of binary stream");
  return s;
}

namespace {

void WriteRaw(std::ostream &os, const double *data, size_t n) {
  static_assert(sizeof(double) == 8);
  for (size_t i = 0; i < n; ++i) {
    uint64_t bits;
    std::memcpy(&bits, data + i, 8);
    WriteU64(os, bits);
  }
}

void ReadRaw(std::istream &is, double *data, size_t n) {
  for (size_t i = 0; i < n; ++i) {
    uint64_t bits = ReadU64(is);
    std::memcpy(data + i, &bits, 8);
  }
}

}  // namespace

void WriteMatrix(std::ostream &os, const Matrix &m) {
  WriteU64(os, static_cast<uint64_t>(m.rows()));
  WriteU64(os, static_cast<uint64_t>(m.cols()));
  WriteRaw(os, m.data(), static_cast<size_t>(m.size()));
}

Matrix ReadMatrix(std::istream &is) {
  uint64_t rows = ReadU64(is), cols = ReadU64(is);
  if (rows > (1ULL << 28) || cols > (1ULL << 28) || rows * cols > (1ULL << 31))
    EMO_ERR("implausible matrix shape " << rows << "x" << cols);
  Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  ReadRaw(is, m.data(), static_cast<size_t>(m.size()));
  return m;
}

void WriteDoubles(std::ostream &os, const std::vector<double> &v) {
  WriteU64(os, v.size());
  WriteRaw(os, v.data(), v.size());
}

std::vector<double> ReadDoubles(std::istream &is) {
  uint64_t n = ReadU64(is);
  if (n > (1ULL << 31)) EMO_ERR("implausible vector length " << n);
  std::vector<double> v(n);
  ReadRaw(is, v.data(), n);
  return v;
}

}  // namespace emoflow
