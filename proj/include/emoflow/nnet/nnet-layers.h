// include/emoflow/nnet/nnet-layers.h

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

#ifndef EMOFLOW_NNET_NNET_LAYERS_H_
#define EMOFLOW_NNET_NNET_LAYERS_H_

#include <iosfwd>
#include <string>
#include <vector>

#include "emoflow/base/random.h"
#include "emoflow/base/types.h"

namespace emoflow {
namespace nnet {

// Small dense layers with hand-written backward passes.  Sequences are
// T x D matrices (one row per frame).  Forward() is const and fills an
// optional cache; Backward() consumes that cache, accumulates into the
// parameter gradients and returns the input gradient.

struct Param {
  std::string name;
  Matrix value;
  Matrix grad;

  void Init(const std::string &n, int rows, int cols);
  void ZeroGrad() { grad.setZero(); }
};

using ParamList = std::vector<Param *>;

void ZeroGrads(const ParamList &params);
int64_t NumParameters(const ParamList &params);
/// Global l2 norm over all gradients.
double GradNorm(const ParamList &params);
/// Names, shapes and values; ReadParams checks names and shapes.
void WriteParams(std::ostream &os, const ParamList &params);
void ReadParams(std::istream &is, const ParamList &params);

/// Uniform(-scale, scale) fill.
void UniformInit(Matrix *m, double scale, Rng *rng);

class Linear {
 public:
  struct Cache {
    Matrix x;
  };
  Linear() = default;
  Linear(const std::string &name, int in_dim, int out_dim, Rng *rng);

  Matrix Forward(const Matrix &x, Cache *cache = nullptr) const;
  Matrix Backward(const Cache &cache, const Matrix &dy);
  void Params(ParamList *out) { out->push_back(&w_); out->push_back(&b_); }
  int InDim() const { return static_cast<int>(w_.value.rows()); }
  int OutDim() const { return static_cast<int>(w_.value.cols()); }

 private:
  Param w_;  // in x out
  Param b_;  // 1 x out
};

// Single-direction LSTM (gates i, f, g, o).  A reversed layer reads the
// sequence from the last frame to the first; outputs stay in input order.
class Lstm {
 public:
  struct Cache {
    Matrix x;
    Matrix gates;   // T x 4H activations
    Matrix c;       // T x H
    Matrix tanh_c;  // T x H
    Matrix h;       // T x H
  };
  Lstm() = default;
  Lstm(const std::string &name, int in_dim, int hidden, bool reverse, Rng *rng);

  Matrix Forward(const Matrix &x, Cache *cache = nullptr) const;
  Matrix Backward(const Cache &cache, const Matrix &dh);
  void Params(ParamList *out) { out->push_back(&wx_); out->push_back(&wh_); out->push_back(&b_); }
  int Hidden() const { return hidden_; }

 private:
  int hidden_ = 0;
  bool reverse_ = false;
  Param wx_;  // in x 4H
  Param wh_;  // H x 4H
  Param b_;   // 1 x 4H
};

/// Output is [forward | backward], T x 2H.
class BiLstm {
 public:
  struct Cache {
    Lstm::Cache fwd, bwd;
  };
  BiLstm() = default;
  BiLstm(const std::string &name, int in_dim, int hidden, Rng *rng);

  Matrix Forward(const Matrix &x, Cache *cache = nullptr) const;
  Matrix Backward(const Cache &cache, const Matrix &dy);
  void Params(ParamList *out) { fwd_.Params(out); bwd_.Params(out); }
  int OutDim() const { return 2 * fwd_.Hidden(); }

 private:
  Lstm fwd_, bwd_;
};

// Multi-channel image: element (r, c, ch) is data(r * width + c, ch).
struct Image {
  int height = 0;
  int width = 0;
  Matrix data;  // (height * width) x channels
  int Channels() const { return static_cast<int>(data.cols()); }
};

/// Stride-1 convolution with zero "same" padding; odd kernel sizes only.
class Conv2d {
 public:
  struct Cache {
    int height = 0, width = 0;
    Matrix cols;  // (H*W) x (kh*kw*cin)
  };
  Conv2d() = default;
  Conv2d(const std::string &name, int in_channels, int out_channels, int kernel_h,
         int kernel_w, Rng *rng);

  Image Forward(const Image &x, Cache *cache = nullptr) const;
  Image Backward(const Cache &cache, const Image &dy);
  void Params(ParamList *out) { out->push_back(&w_); out->push_back(&b_); }

 private:
  Matrix Im2Col(const Image &x) const;
  int cin_ = 0, kh_ = 1, kw_ = 1;
  Param w_;  // (kh*kw*cin) x cout
  Param b_;  // 1 x cout
};

/// Non-overlapping max pooling; trailing rows/columns that do not fill a
/// window are dropped.
class MaxPool2d {
 public:
  struct Cache {
    int height = 0, width = 0;
    std::vector<int> argmax;  // per output element, source row index
  };
  MaxPool2d() = default;
  MaxPool2d(int pool_h, int pool_w) : ph_(pool_h), pw_(pool_w) {}

  Image Forward(const Image &x, Cache *cache = nullptr) const;
  Image Backward(const Cache &cache, const Image &dy) const;

 private:
  int ph_ = 1, pw_ = 1;
};

// Additive single-query attention: e = tanh(H W + b), s = e v,
// alpha = softmax(s), out = alpha^T H.
class AttentionPool {
 public:
  struct Cache {
    Matrix h;
    Matrix e;
    Vector alpha;
  };
  AttentionPool() = default;
  AttentionPool(const std::string &name, int in_dim, int att_dim, Rng *rng);

  /// Returns a 1 x D row; the weights are written to *alpha when given.
  Matrix Forward(const Matrix &h, Cache *cache = nullptr, Vector *alpha = nullptr) const;
  Matrix Backward(const Cache &cache, const Matrix &dout);
  void Params(ParamList *out) { out->push_back(&w_); out->push_back(&b_); out->push_back(&v_); }

 private:
  Param w_;  // D x A
  Param b_;  // 1 x A
  Param v_;  // A x 1
};

Matrix Tanh(const Matrix &x);
/// dy * (1 - y^2) given the forward output y.
Matrix TanhBackward(const Matrix &y, const Matrix &dy);
Matrix LeakyRelu(const Matrix &x, double slope);
Matrix LeakyReluBackward(const Matrix &x, const Matrix &dy, double slope);

/// Averages consecutive groups of `factor` rows; the last group may be
/// shorter.  Output has ceil(T / factor) rows.
Matrix AvgPoolTime(const Matrix &x, int factor);
Matrix AvgPoolTimeBackward(const Matrix &dy, int num_frames, int factor);

/// Softmax of a row vector, computed stably.
Vector Softmax(const Vector &logits);
/// Cross-entropy of softmax(logits) against `label`; writes d/dlogits.
double SoftmaxCrossEntropy(const Vector &logits, int label, Vector *dlogits);

/// x divided by its l2 norm; a zero vector maps to the first unit vector.
Vector L2Normalize(const Vector &x);

}  // namespace nnet
}  // namespace emoflow

#endif  // EMOFLOW_NNET_NNET_LAYERS_H_
