// include/emoflow/base/random.h

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

#ifndef EMOFLOW_BASE_RANDOM_H_
#define EMOFLOW_BASE_RANDOM_H_

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace emoflow {

// Seed derivation used everywhere a stage needs its own stream:
//   DeriveSeed(s, tag) = splitmix64(s XOR fnv1a64(tag)).
// Partial reruns of a stage reproduce the same stream given the same
// global seed and tag.
uint64_t Fnv1a64(std::string_view data, uint64_t basis = 14695981039346656037ULL);
uint64_t SplitMix64(uint64_t x);
uint64_t DeriveSeed(uint64_t seed, std::string_view tag);

// Draws are computed from raw mt19937_64 output so that sequences are
// identical across standard libraries (std distributions are not).
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  uint64_t NextU64() { return engine_(); }
  /// Uniform in [0, 1).
  double Uniform();
  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform(); }
  /// Uniform integer in [lo, hi], both inclusive.
  int64_t UniformInt(int64_t lo, int64_t hi);
  double Normal();

  template <typename T>
  void Shuffle(std::vector<T> *v) {
    for (size_t i = v->size(); i > 1; --i) {
      size_t j = static_cast<size_t>(UniformInt(0, static_cast<int64_t>(i) - 1));
      std::swap((*v)[i - 1], (*v)[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace emoflow

#endif  // EMOFLOW_BASE_RANDOM_H_
