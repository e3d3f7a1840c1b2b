// Copyright 2026 The pinas Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "pinas/ops/plaintext.h"

#include <algorithm>
#include <cmath>

#include "pinas/common/errors.h"

namespace pinas {
namespace {

RingElem Floor(RingElem v, const RingConfig& cfg) {
  return RingArithShift(v, cfg.frac_bits, cfg);
}

FixedTensor AddBiasRows(FixedTensor y, const FixedTensor& bias) {
  const int64_t rows = bias.size();
  const int64_t cols = y.size() / rows;
  const RingConfig& cfg = y.config();
  for (int64_t r = 0; r < rows; ++r) {
    for (int64_t c = 0; c < cols; ++c) y[r * cols + c] = cfg.Reduce(y[r * cols + c] + bias[r]);
  }
  return y;
}

}  // namespace

FixedTensor Im2Col(const FixedTensor& x, const LayerSpec& l) {
  const Shape out = LayerOutputShape(l, x.shape());
  const int64_t C = x.shape()[0], H = x.shape()[1], W = x.shape()[2];
  const int64_t OH = out[1], OW = out[2];
  FixedTensor cols({C * l.kernel_h * l.kernel_w, OH * OW}, x.config());
  for (int64_t c = 0; c < C; ++c) {
    for (int64_t ki = 0; ki < l.kernel_h; ++ki) {
      for (int64_t kj = 0; kj < l.kernel_w; ++kj) {
        const int64_t row = (c * l.kernel_h + ki) * l.kernel_w + kj;
        for (int64_t oi = 0; oi < OH; ++oi) {
          for (int64_t oj = 0; oj < OW; ++oj) {
            const int64_t i = oi * l.stride_h + ki - l.padding;
            const int64_t j = oj * l.stride_w + kj - l.padding;
            if (i < 0 || i >= H || j < 0 || j >= W) continue;
            cols[row * OH * OW + oi * OW + oj] = x[(c * H + i) * W + j];
          }
        }
      }
    }
  }
  return cols;
}

std::vector<FixedTensor> PoolWindows(const FixedTensor& x, const LayerSpec& l) {
  const Shape out = LayerOutputShape(l, x.shape());
  const int64_t C = x.shape()[0], H = x.shape()[1], W = x.shape()[2];
  const int64_t OH = out[1], OW = out[2];
  std::vector<FixedTensor> windows;
  for (int64_t ki = 0; ki < l.kernel_h; ++ki) {
    for (int64_t kj = 0; kj < l.kernel_w; ++kj) {
      FixedTensor t(out, x.config());
      for (int64_t c = 0; c < C; ++c) {
        for (int64_t oi = 0; oi < OH; ++oi) {
          for (int64_t oj = 0; oj < OW; ++oj) {
            t[(c * OH + oi) * OW + oj] =
                x[(c * H + oi * l.stride_h + ki) * W + oj * l.stride_w + kj];
          }
        }
      }
      windows.push_back(std::move(t));
    }
  }
  return windows;
}

X2ActRing X2ActConstants(const X2ActCoeffs& c, const RingConfig& cfg) {
  return {Encode(c.scale(), cfg), Encode(c.w2, cfg), Encode(c.b, cfg)};
}

FixedTensor PlainLayer(const LayerSpec& l, const FixedTensor& x) {
  const RingConfig& cfg = x.config();
  const Shape out = LayerOutputShape(l, x.shape());
  switch (l.kind) {
    case LayerKind::kConv: {
      FixedTensor w = l.weight.Reshaped({l.out_channels, NumElements(l.weight.shape()) / l.out_channels});
      FixedTensor y = MatMul(w, Im2Col(x, l));
      for (auto& v : y.data()) v = Floor(v, cfg);
      return AddBiasRows(std::move(y), l.bias).Reshaped(out);
    }
    case LayerKind::kFc: {
      FixedTensor y = MatMul(l.weight, x.Reshaped({x.size(), 1}));
      for (auto& v : y.data()) v = Floor(v, cfg);
      return AddBiasRows(std::move(y), l.bias).Reshaped(out);
    }
    case LayerKind::kRelu: {
      FixedTensor y = x;
      for (auto& v : y.data()) v = cfg.ToSigned(v) < 0 ? 0 : v;
      return y;
    }
    case LayerKind::kMaxPool: {
      auto win = PoolWindows(x, l);
      FixedTensor y = win[0];
      for (size_t t = 1; t < win.size(); ++t) {
        for (int64_t i = 0; i < y.size(); ++i) {
          if (cfg.ToSigned(win[t][i]) > cfg.ToSigned(y[i])) y[i] = win[t][i];
        }
      }
      return y;
    }
    case LayerKind::kAvgPool: {
      auto win = PoolWindows(x, l);
      FixedTensor sum = win[0];
      for (size_t t = 1; t < win.size(); ++t) sum = Add(sum, win[t]);
      const RingElem inv = Encode(1.0 / double(win.size()), cfg);
      for (auto& v : sum.data()) v = Floor(cfg.Reduce(v * inv), cfg);
      return sum;
    }
    case LayerKind::kX2Act: {
      const X2ActRing k = X2ActConstants(l.x2act, cfg);
      FixedTensor y = x;
      for (auto& v : y.data()) {
        const RingElem sq = Floor(cfg.Reduce(v * v), cfg);
        v = cfg.Reduce(Floor(cfg.Reduce(k.a * sq + k.w2 * v), cfg) + k.b);
      }
      return y;
    }
  }
  throw ShapeError("unknown layer kind");
}

FixedTensor PlainForward(const ModelSpec& m, const FixedTensor& x,
                         std::vector<FixedTensor>* trace) {
  if (x.shape() != m.input_shape) {
    throw ShapeError("input shape " + ShapeString(x.shape()) + " does not match model " +
                     ShapeString(m.input_shape));
  }
  FixedTensor cur = x;
  for (const auto& l : m.layers) {
    cur = PlainLayer(l, cur);
    if (trace) trace->push_back(cur);
  }
  return cur;
}

std::vector<double> FloatForward(const ModelSpec& m, const std::vector<double>& input) {
  const auto shapes = m.Shapes();
  std::vector<double> x = input;
  for (size_t li = 0; li < m.layers.size(); ++li) {
    const LayerSpec& l = m.layers[li];
    const Shape& in = shapes[li];
    const Shape& out = shapes[li + 1];
    std::vector<double> y(size_t(NumElements(out)), 0.0);
    switch (l.kind) {
      case LayerKind::kConv: {
        const auto w = l.weight.ToReals();
        const auto b = l.bias.ToReals();
        const int64_t H = in[1], W = in[2], OH = out[1], OW = out[2];
        for (int64_t o = 0; o < l.out_channels; ++o) {
          for (int64_t oi = 0; oi < OH; ++oi) {
            for (int64_t oj = 0; oj < OW; ++oj) {
              double acc = b[o];
              for (int64_t c = 0; c < l.in_channels; ++c) {
                for (int64_t ki = 0; ki < l.kernel_h; ++ki) {
                  for (int64_t kj = 0; kj < l.kernel_w; ++kj) {
                    const int64_t i = oi * l.stride_h + ki - l.padding;
                    const int64_t j = oj * l.stride_w + kj - l.padding;
                    if (i < 0 || i >= H || j < 0 || j >= W) continue;
                    acc += w[((o * l.in_channels + c) * l.kernel_h + ki) * l.kernel_w + kj] *
                           x[(c * H + i) * W + j];
                  }
                }
              }
              y[(o * OH + oi) * OW + oj] = acc;
            }
          }
        }
        break;
      }
      case LayerKind::kFc: {
        const auto w = l.weight.ToReals();
        const auto b = l.bias.ToReals();
        for (int64_t o = 0; o < l.out_channels; ++o) {
          double acc = b[o];
          for (int64_t i = 0; i < l.in_channels; ++i) acc += w[o * l.in_channels + i] * x[i];
          y[o] = acc;
        }
        break;
      }
      case LayerKind::kRelu:
        for (size_t i = 0; i < y.size(); ++i) y[i] = std::max(x[i], 0.0);
        break;
      case LayerKind::kX2Act:
        for (size_t i = 0; i < y.size(); ++i) y[i] = l.x2act.Eval(x[i]);
        break;
      case LayerKind::kMaxPool:
      case LayerKind::kAvgPool: {
        const int64_t H = in[1], W = in[2], OH = out[1], OW = out[2];
        for (int64_t c = 0; c < in[0]; ++c) {
          for (int64_t oi = 0; oi < OH; ++oi) {
            for (int64_t oj = 0; oj < OW; ++oj) {
              double best = -INFINITY, sum = 0;
              for (int64_t ki = 0; ki < l.kernel_h; ++ki) {
                for (int64_t kj = 0; kj < l.kernel_w; ++kj) {
                  const double v = x[(c * H + oi * l.stride_h + ki) * W + oj * l.stride_w + kj];
                  best = std::max(best, v);
                  sum += v;
                }
              }
              y[(c * OH + oi) * OW + oj] = l.kind == LayerKind::kMaxPool
                                               ? best
                                               : sum / double(l.kernel_h * l.kernel_w);
            }
          }
        }
        break;
      }
    }
    x = std::move(y);
  }
  return x;
}

}  // namespace pinas
