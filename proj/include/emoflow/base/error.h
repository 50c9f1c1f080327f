// include/emoflow/base/error.h

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

#ifndef EMOFLOW_BASE_ERROR_H_
#define EMOFLOW_BASE_ERROR_H_

#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace emoflow {

// Domain failure: bad input data, inconsistent artifacts, numerical blow-up.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string &msg) : std::runtime_error(msg) {}
};

// Malformed invocation; the CLI maps this to exit code 2.
class UsageError : public Error {
 public:
  explicit UsageError(const std::string &msg) : Error(msg) {}
};

/// Verbosity for EMO_VLOG; 0 silences progress logging.
int GetVerboseLevel();
void SetVerboseLevel(int level);

}  // namespace emoflow

#define EMO_ERR(expr)                          \
  do {                                         \
    std::ostringstream emo_os_;                \
    emo_os_ << expr;                           \
    throw ::emoflow::Error(emo_os_.str());     \
  } while (0)

#define EMO_USAGE_ERR(expr)                       \
  do {                                            \
    std::ostringstream emo_os_;                   \
    emo_os_ << expr;                              \
    throw ::emoflow::UsageError(emo_os_.str());   \
  } while (0)

#define EMO_ASSERT(cond)                                                \
  do {                                                                  \
    if (!(cond))                                                        \
      EMO_ERR("assertion failed: " #cond " (" __FILE__ ":" << __LINE__  \
              << ")");                                                  \
  } while (0)

#define EMO_LOG(expr)                                    \
  do {                                                   \
    std::cerr << "LOG (emoflow) " << expr << std::endl;  \
  } while (0)

#define EMO_VLOG(level, expr)                                         \
  do {                                                                \
    if (::emoflow::GetVerboseLevel() >= (level))                      \
      std::cerr << "VLOG[" << (level) << "] " << expr << std::endl;   \
  } while (0)

#define EMO_WARN(expr)                                       \
  do {                                                       \
    std::cerr << "WARNING (emoflow) " << expr << std::endl;  \
  } while (0)

#endif  // EMOFLOW_BASE_ERROR_H_
