// src/nnet/nnet-layers.cc

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

#include "emoflow/nnet/nnet-layers.h"

#include <cmath>
#include <istream>
#include <ostream>

#include "emoflow/base/error.h"
#include "emoflow/base/io.h"

namespace emoflow {
namespace nnet {

namespace {

inline double Sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

void CheckCols(const Matrix &x, Eigen::Index cols, const char *what) {
  if (x.cols() != cols)
    EMO_ERR(what << ": expected " << cols << " input columns, got " << x.cols());
}

}  // namespace

void Param::Init(const std::string &n, int rows, int cols) {
  name = n;
  value = Matrix::Zero(rows, cols);
  grad = Matrix::Zero(rows, cols);
}

void ZeroGrads(const ParamList &params) {
  for (Param *p : params) p->ZeroGrad();
}

int64_t NumParameters(const ParamList &params) {
  int64_t n = 0;
  for (const Param *p : params) n += p->value.size();
  return n;
}

double GradNorm(const ParamList &params) {
  double s = 0.0;
  for (const Param *p : params) s += p->grad.squaredNorm();
  return std::sqrt(s);
}

void WriteParams(std::ostream &os, const ParamList &params) {
  WriteU64(os, params.size());
  for (const Param *p : params) {
    WriteString(os, p->name);
    WriteMatrix(os, p->value);
  }
  if (!os) EMO_ERR("failed writing parameters");
}

void ReadParams(std::istream &is, const ParamList &params) {
  uint64_t n = ReadU64(is);
  if (n != params.size())
    EMO_ERR("parameter count mismatch: file has " << n << ", model has " << params.size());
  for (Param *p : params) {
    std::string name = ReadString(is);
    if (name != p->name) EMO_ERR("parameter name mismatch: '" << name << "' vs '" << p->name << "'");
    Matrix m = ReadMatrix(is);
    if (m.rows() != p->value.rows() || m.cols() != p->value.cols())
      EMO_ERR("shape mismatch for parameter " << name);
    p->value = m;
    p->grad.setZero();
  }
}

void UniformInit(Matrix *m, double scale, Rng *rng) {
  for (Eigen::Index i = 0; i < m->rows(); ++i)
    for (Eigen::Index j = 0; j < m->cols(); ++j) (*m)(i, j) = rng->Uniform(-scale, scale);
}

// ---------------------------------------------------------------- Linear

Linear::Linear(const std::string &name, int in_dim, int out_dim, Rng *rng) {
  w_.Init(name + ".w", in_dim, out_dim);
  b_.Init(name + ".b", 1, out_dim);
  UniformInit(&w_.value, std::sqrt(6.0 / (in_dim + out_dim)), rng);
}

Matrix Linear::Forward(const Matrix &x, Cache *cache) const {
  CheckCols(x, w_.value.rows(), w_.name.c_str());
  if (cache) cache->x = x;
  Matrix y = x * w_.value;
  y.rowwise() += b_.value.row(0);
  return y;
}

Matrix Linear::Backward(const Cache &cache, const Matrix &dy) {
  w_.grad.noalias() += cache.x.transpose() * dy;
  b_.grad.row(0) += dy.colwise().sum();
  return dy * w_.value.transpose();
}

// ------------------------------------------------------------------ Lstm

Lstm::Lstm(const std::string &name, int in_dim, int hidden, bool reverse, Rng *rng)
    : hidden_(hidden), reverse_(reverse) {
  wx_.Init(name + ".wx", in_dim, 4 * hidden);
  wh_.Init(name + ".wh", hidden, 4 * hidden);
  b_.Init(name + ".b", 1, 4 * hidden);
  double scale = 1.0 / std::sqrt(static_cast<double>(hidden));
  UniformInit(&wx_.value, scale, rng);
  UniformInit(&wh_.value, scale, rng);
  b_.value.block(0, hidden, 1, hidden).setConstant(1.0);  // forget gate
}

Matrix Lstm::Forward(const Matrix &x, Cache *cache) const {
  CheckCols(x, wx_.value.rows(), wx_.name.c_str());
  const int T = static_cast<int>(x.rows()), H = hidden_;
  Matrix pre = x * wx_.value;
  pre.rowwise() += b_.value.row(0);
  Matrix gates(T, 4 * H), c(T, H), tanh_c(T, H), h(T, H);
  RowVector h_prev = RowVector::Zero(H), c_prev = RowVector::Zero(H), z(4 * H);
  for (int k = 0; k < T; ++k) {
    const int t = reverse_ ? T - 1 - k : k;
    z.noalias() = pre.row(t) + h_prev * wh_.value;
    for (int j = 0; j < H; ++j) {
      double i = Sigmoid(z(j)), f = Sigmoid(z(H + j)), g = std::tanh(z(2 * H + j)),
             o = Sigmoid(z(3 * H + j));
      gates(t, j) = i;
      gates(t, H + j) = f;
      gates(t, 2 * H + j) = g;
      gates(t, 3 * H + j) = o;
      double cc = f * c_prev(j) + i * g;
      double tc = std::tanh(cc);
      c(t, j) = cc;
      tanh_c(t, j) = tc;
      h(t, j) = o * tc;
    }
    h_prev = h.row(t);
    c_prev = c.row(t);
  }
  if (cache) {
    cache->x = x;
    cache->gates = std::move(gates);
    cache->c = std::move(c);
    cache->tanh_c = std::move(tanh_c);
    cache->h = h;
  }
  return h;
}

Matrix Lstm::Backward(const Cache &cache, const Matrix &dh) {
  const int T = static_cast<int>(cache.h.rows()), H = hidden_;
  Matrix dz(T, 4 * H);
  RowVector dh_next = RowVector::Zero(H), dc_next = RowVector::Zero(H);
  for (int k = T - 1; k >= 0; --k) {
    const int t = reverse_ ? T - 1 - k : k;
    const int prev = reverse_ ? t + 1 : t - 1;
    const bool has_prev = k > 0;
    for (int j = 0; j < H; ++j) {
      double i = cache.gates(t, j), f = cache.gates(t, H + j), g = cache.gates(t, 2 * H + j),
             o = cache.gates(t, 3 * H + j), tc = cache.tanh_c(t, j);
      double dhj = dh(t, j) + dh_next(j);
      double dc = dhj * o * (1.0 - tc * tc) + dc_next(j);
      double cp = has_prev ? cache.c(prev, j) : 0.0;
      dz(t, j) = dc * g * i * (1.0 - i);
      dz(t, H + j) = dc * cp * f * (1.0 - f);
      dz(t, 2 * H + j) = dc * i * (1.0 - g * g);
      dz(t, 3 * H + j) = dhj * tc * o * (1.0 - o);
      dc_next(j) = dc * f;
    }
    dh_next.noalias() = dz.row(t) * wh_.value.transpose();
    if (has_prev) wh_.grad.noalias() += cache.h.row(prev).transpose() * dz.row(t);
  }
  wx_.grad.noalias() += cache.x.transpose() * dz;
  b_.grad.row(0) += dz.colwise().sum();
  return dz * wx_.value.transpose();
}

// ---------------------------------------------------------------- BiLstm

BiLstm::BiLstm(const std::string &name, int in_dim, int hidden, Rng *rng)
    : fwd_(name + ".fwd", in_dim, hidden, false, rng),
      bwd_(name + ".bwd", in_dim, hidden, true, rng) {}

Matrix BiLstm::Forward(const Matrix &x, Cache *cache) const {
  Matrix a = fwd_.Forward(x, cache ? &cache->fwd : nullptr);
  Matrix b = bwd_.Forward(x, cache ? &cache->bwd : nullptr);
  Matrix y(x.rows(), a.cols() + b.cols());
  y << a, b;
  return y;
}

Matrix BiLstm::Backward(const Cache &cache, const Matrix &dy) {
  const int H = fwd_.Hidden();
  Matrix dx = fwd_.Backward(cache.fwd, dy.leftCols(H));
  dx += bwd_.Backward(cache.bwd, dy.rightCols(H));
  return dx;
}

// ---------------------------------------------------------------- Conv2d

Conv2d::Conv2d(const std::string &name, int in_channels, int out_channels, int kernel_h,
               int kernel_w, Rng *rng)
    : cin_(in_channels), kh_(kernel_h), kw_(kernel_w) {
  if (kernel_h % 2 == 0 || kernel_w % 2 == 0) EMO_ERR("conv kernel sizes must be odd");
  const int fan_in = kernel_h * kernel_w * in_channels;
  w_.Init(name + ".w", fan_in, out_channels);
  b_.Init(name + ".b", 1, out_channels);
  UniformInit(&w_.value, std::sqrt(6.0 / (fan_in + kernel_h * kernel_w * out_channels)), rng);
}

Matrix Conv2d::Im2Col(const Image &x) const {
  const int H = x.height, W = x.width, rh = kh_ / 2, rw = kw_ / 2;
  Matrix cols = Matrix::Zero(static_cast<Eigen::Index>(H) * W, kh_ * kw_ * cin_);
  for (int r = 0; r < H; ++r)
    for (int c = 0; c < W; ++c) {
      const int row = r * W + c;
      for (int i = 0; i < kh_; ++i) {
        const int rr = r + i - rh;
        if (rr < 0 || rr >= H) continue;
        for (int j = 0; j < kw_; ++j) {
          const int cc = c + j - rw;
          if (cc < 0 || cc >= W) continue;
          cols.block(row, (i * kw_ + j) * cin_, 1, cin_) = x.data.row(rr * W + cc);
        }
      }
    }
  return cols;
}

Image Conv2d::Forward(const Image &x, Cache *cache) const {
  if (x.Channels() != cin_ || x.data.rows() != static_cast<Eigen::Index>(x.height) * x.width)
    EMO_ERR(w_.name << ": bad input image " << x.height << "x" << x.width << "x"
            << x.Channels());
  Matrix cols = Im2Col(x);
  Image y;
  y.height = x.height;
  y.width = x.width;
  y.data = cols * w_.value;
  y.data.rowwise() += b_.value.row(0);
  if (cache) {
    cache->height = x.height;
    cache->width = x.width;
    cache->cols = std::move(cols);
  }
  return y;
}

Image Conv2d::Backward(const Cache &cache, const Image &dy) {
  w_.grad.noalias() += cache.cols.transpose() * dy.data;
  b_.grad.row(0) += dy.data.colwise().sum();
  Matrix dcols = dy.data * w_.value.transpose();
  const int H = cache.height, W = cache.width, rh = kh_ / 2, rw = kw_ / 2;
  Image dx;
  dx.height = H;
  dx.width = W;
  dx.data = Matrix::Zero(static_cast<Eigen::Index>(H) * W, cin_);
  for (int r = 0; r < H; ++r)
    for (int c = 0; c < W; ++c) {
      const int row = r * W + c;
      for (int i = 0; i < kh_; ++i) {
        const int rr = r + i - rh;
        if (rr < 0 || rr >= H) continue;
        for (int j = 0; j < kw_; ++j) {
          const int cc = c + j - rw;
          if (cc < 0 || cc >= W) continue;
          dx.data.row(rr * W + cc) += dcols.block(row, (i * kw_ + j) * cin_, 1, cin_);
        }
      }
    }
  return dx;
}

// ------------------------------------------------------------- MaxPool2d

Image MaxPool2d::Forward(const Image &x, Cache *cache) const {
  const int oh = x.height / ph_, ow = x.width / pw_, C = x.Channels();
  if (oh < 1 || ow < 1)
    EMO_ERR("max pooling " << ph_ << "x" << pw_ << " larger than input " << x.height << "x"
            << x.width);
  Image y;
  y.height = oh;
  y.width = ow;
  y.data.resize(static_cast<Eigen::Index>(oh) * ow, C);
  std::vector<int> argmax(static_cast<size_t>(oh) * ow * C);
  for (int r = 0; r < oh; ++r)
    for (int c = 0; c < ow; ++c)
      for (int ch = 0; ch < C; ++ch) {
        int best = (r * ph_) * x.width + c * pw_;
        double best_v = x.data(best, ch);
        for (int i = 0; i < ph_; ++i)
          for (int j = 0; j < pw_; ++j) {
            int src = (r * ph_ + i) * x.width + c * pw_ + j;
            if (x.data(src, ch) > best_v) {
              best_v = x.data(src, ch);
              best = src;
            }
          }
        y.data(r * ow + c, ch) = best_v;
        argmax[(static_cast<size_t>(r) * ow + c) * C + ch] = best;
      }
  if (cache) {
    cache->height = x.height;
    cache->width = x.width;
    cache->argmax = std::move(argmax);
  }
  return y;
}

Image MaxPool2d::Backward(const Cache &cache, const Image &dy) const {
  const int C = dy.Channels();
  Image dx;
  dx.height = cache.height;
  dx.width = cache.width;
  dx.data = Matrix::Zero(static_cast<Eigen::Index>(cache.height) * cache.width, C);
  for (Eigen::Index o = 0; o < dy.data.rows(); ++o)
    for (int ch = 0; ch < C; ++ch) dx.data(cache.argmax[o * C + ch], ch) += dy.data(o, ch);
  return dx;
}

// --------------------------------------------------------- AttentionPool

AttentionPool::AttentionPool(const std::string &name, int in_dim, int att_dim, Rng *rng) {
  w_.Init(name + ".w", in_dim, att_dim);
  b_.Init(name + ".b", 1, att_dim);
  v_.Init(name + ".v", att_dim, 1);
  UniformInit(&w_.value, std::sqrt(6.0 / (in_dim + att_dim)), rng);
  UniformInit(&v_.value, std::sqrt(6.0 / (att_dim + 1)), rng);
}

Matrix AttentionPool::Forward(const Matrix &h, Cache *cache, Vector *alpha_out) const {
  CheckCols(h, w_.value.rows(), w_.name.c_str());
  if (h.rows() == 0) EMO_ERR("attention over an empty sequence");
  Matrix e = h * w_.value;
  e.rowwise() += b_.value.row(0);
  e = e.array().tanh().matrix();
  Vector s = e * v_.value;
  Vector alpha = Softmax(s);
  Matrix out = alpha.transpose() * h;
  if (alpha_out) *alpha_out = alpha;
  if (cache) {
    cache->h = h;
    cache->e = std::move(e);
    cache->alpha = std::move(alpha);
  }
  return out;
}

Matrix AttentionPool::Backward(const Cache &cache, const Matrix &dout) {
  const Vector &a = cache.alpha;
  Matrix dh = a * dout;  // T x D
  Vector da = cache.h * dout.transpose();
  double dot = a.dot(da);
  Vector ds = a.array() * (da.array() - dot);
  v_.grad.noalias() += cache.e.transpose() * ds;
  Matrix de = ds * v_.value.transpose();
  Matrix dpre = de.array() * (1.0 - cache.e.array().square());
  w_.grad.noalias() += cache.h.transpose() * dpre;
  b_.grad.row(0) += dpre.colwise().sum();
  dh.noalias() += dpre * w_.value.transpose();
  return dh;
}

// ------------------------------------------------------------ Functions

Matrix Tanh(const Matrix &x) { return x.array().tanh().matrix(); }

Matrix TanhBackward(const Matrix &y, const Matrix &dy) {
  return (dy.array() * (1.0 - y.array().square())).matrix();
}

Matrix LeakyRelu(const Matrix &x, double slope) {
  return (x.array() > 0).select(x, slope * x);
}

Matrix LeakyReluBackward(const Matrix &x, const Matrix &dy, double slope) {
  return (x.array() > 0).select(dy, slope * dy);
}

Matrix AvgPoolTime(const Matrix &x, int factor) {
  if (factor < 1) EMO_ERR("pooling factor must be positive");
  const int T = static_cast<int>(x.rows());
  const int n = (T + factor - 1) / factor;
  Matrix y(n, x.cols());
  for (int k = 0; k < n; ++k) {
    const int start = k * factor, len = std::min(factor, T - start);
    y.row(k) = x.middleRows(start, len).colwise().mean();
  }
  return y;
}

Matrix AvgPoolTimeBackward(const Matrix &dy, int num_frames, int factor) {
  Matrix dx(num_frames, dy.cols());
  for (int k = 0; k < dy.rows(); ++k) {
    const int start = k * factor, len = std::min(factor, num_frames - start);
    for (int t = 0; t < len; ++t) dx.row(start + t) = dy.row(k) / len;
  }
  return dx;
}

Vector Softmax(const Vector &logits) {
  Vector p = (logits.array() - logits.maxCoeff()).exp();
  return p / p.sum();
}

double SoftmaxCrossEntropy(const Vector &logits, int label, Vector *dlogits) {
  if (label < 0 || label >= logits.size()) EMO_ERR("label " << label << " out of range");
  const double m = logits.maxCoeff();
  const double lse = m + std::log((logits.array() - m).exp().sum());
  if (dlogits) {
    *dlogits = (logits.array() - lse).exp();
    (*dlogits)(label) -= 1.0;
  }
  return lse - logits(label);
}

Vector L2Normalize(const Vector &x) {
  const double n = x.norm();
  if (n > 0.0) return x / n;
  Vector e = Vector::Zero(x.size());
  if (e.size() > 0) e(0) = 1.0;
  return e;
}

}  // namespace nnet
}  // namespace emoflow
