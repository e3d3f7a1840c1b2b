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

#include "pinas/ops/secure_ops.h"

#include "pinas/common/errors.h"
#include "pinas/ops/plaintext.h"

namespace pinas {
namespace {

Share AddBiasRows(Share y, const FixedTensor& bias, int party) {
  if (party != 0) return y;
  const int64_t rows = bias.size();
  const int64_t cols = y.size() / rows;
  const RingConfig& cfg = y.config();
  for (int64_t r = 0; r < rows; ++r) {
    for (int64_t c = 0; c < cols; ++c) {
      y.tensor[r * cols + c] = cfg.Reduce(y.tensor[r * cols + c] + bias[r]);
    }
  }
  return y;
}

Share SharedBiasRows(Share y, const Share& bias) {
  const int64_t rows = bias.size();
  const int64_t cols = y.size() / rows;
  const RingConfig& cfg = y.config();
  for (int64_t r = 0; r < rows; ++r) {
    for (int64_t c = 0; c < cols; ++c) {
      y.tensor[r * cols + c] = cfg.Reduce(y.tensor[r * cols + c] + bias.tensor[r]);
    }
  }
  return y;
}

void CheckKind(const LayerSpec& l, LayerKind want, const char* op) {
  if (l.kind != want) {
    throw ShapeError(std::string(op) + ": layer '" + l.name + "' is " + LayerKindName(l.kind));
  }
}

FixedTensor FlatWeight(const LayerSpec& l) {
  return l.weight.Reshaped({l.out_channels, l.weight.size() / l.out_channels});
}

}  // namespace

const char* WeightsModeName(WeightsMode m) {
  return m == WeightsMode::kPublic ? "public" : "shared";
}

WeightsMode ParseWeightsMode(const std::string& s) {
  if (s == "public") return WeightsMode::kPublic;
  if (s == "shared") return WeightsMode::kShared;
  throw ConfigError("weights mode must be public or shared, got '" + s + "'");
}

Share Conv2pc(Party& p, const Share& x, const LayerSpec& l) {
  CheckKind(l, LayerKind::kConv, "Conv2pc");
  const Shape out = LayerOutputShape(l, x.shape());
  Share y{p.id(), MatMul(FlatWeight(l), Im2Col(x.tensor, l)), x.session};
  y = Truncate(y, x.config().frac_bits);
  return Reshaped(AddBiasRows(std::move(y), l.bias, p.id()), out);
}

Share Conv2pc(Party& p, const Share& x, const LayerSpec& l, const SharedParams& w) {
  CheckKind(l, LayerKind::kConv, "Conv2pc");
  const Shape out = LayerOutputShape(l, x.shape());
  Share cols{p.id(), Im2Col(x.tensor, l), x.session};
  Share y = BeaverMul(p, w.weight, cols, ProductKind::kMatMul);
  y = Truncate(y, x.config().frac_bits);
  return Reshaped(SharedBiasRows(std::move(y), w.bias), out);
}

Share Fc2pc(Party& p, const Share& x, const LayerSpec& l) {
  CheckKind(l, LayerKind::kFc, "Fc2pc");
  const Shape out = LayerOutputShape(l, x.shape());
  Share y{p.id(), MatMul(l.weight, x.tensor.Reshaped({x.size(), 1})), x.session};
  y = Truncate(y, x.config().frac_bits);
  return Reshaped(AddBiasRows(std::move(y), l.bias, p.id()), out);
}

Share Fc2pc(Party& p, const Share& x, const LayerSpec& l, const SharedParams& w) {
  CheckKind(l, LayerKind::kFc, "Fc2pc");
  const Shape out = LayerOutputShape(l, x.shape());
  Share y = BeaverMul(p, w.weight, Reshaped(x, {x.size(), 1}), ProductKind::kMatMul);
  y = Truncate(y, x.config().frac_bits);
  return Reshaped(SharedBiasRows(std::move(y), w.bias), out);
}

Share Relu2pc(Party& p, const Share& x, const OtGroup& group) {
  CmpShare d = Drelu(p, x, group);
  return BeaverMul(p, x, d, ProductKind::kHadamard);
}

Share MaxPool2pc(Party& p, const Share& x, const LayerSpec& l, const OtGroup& group) {
  CheckKind(l, LayerKind::kMaxPool, "MaxPool2pc");
  auto windows = PoolWindows(x.tensor, l);
  Share cur{p.id(), windows[0], x.session};
  for (size_t t = 1; t < windows.size(); ++t) {
    Share s{p.id(), std::move(windows[t]), x.session};
    CmpShare b = SecureCmp(p, s, cur, group);
    cur = ShareAdd(BeaverMul(p, b, ShareSub(s, cur), ProductKind::kHadamard), cur);
  }
  return cur;
}

Share AvgPool2pc(const Share& x, const LayerSpec& l) {
  CheckKind(l, LayerKind::kAvgPool, "AvgPool2pc");
  auto windows = PoolWindows(x.tensor, l);
  FixedTensor sum = windows[0];
  for (size_t t = 1; t < windows.size(); ++t) sum = Add(sum, windows[t]);
  const RingElem inv = Encode(1.0 / double(windows.size()), x.config());
  return Truncate(Share{x.party, Scale(inv, sum), x.session}, x.config().frac_bits);
}

Share X2Act2pc(Party& p, const Share& x, const LayerSpec& l) {
  CheckKind(l, LayerKind::kX2Act, "X2Act2pc");
  const RingConfig& cfg = x.config();
  const X2ActRing k = X2ActConstants(l.x2act, cfg);
  Share sq = Truncate(BeaverSquare(p, x), cfg.frac_bits);
  Share t = ShareAdd(ShareScale(k.a, sq), ShareScale(k.w2, x));
  return AddPublicScalar(Truncate(t, cfg.frac_bits), k.b);
}

std::vector<MaterialRequest> PlanLayerMaterial(const LayerSpec& l, const Shape& in,
                                               WeightsMode mode) {
  const Shape out = LayerOutputShape(l, in);
  const int64_t n_out = NumElements(out);
  switch (l.kind) {
    case LayerKind::kConv:
      if (mode == WeightsMode::kPublic) return {};
      return {MaterialRequest::Triple(TripleShape::MatMul(
          l.out_channels, l.in_channels * l.kernel_h * l.kernel_w, out[1] * out[2]))};
    case LayerKind::kFc:
      if (mode == WeightsMode::kPublic) return {};
      return {MaterialRequest::Triple(TripleShape::MatMul(l.out_channels, l.in_channels, 1))};
    case LayerKind::kRelu:
      return {MaterialRequest::Triple(TripleShape::Hadamard(n_out))};
    case LayerKind::kMaxPool:
      return std::vector<MaterialRequest>(size_t(l.kernel_h * l.kernel_w - 1),
                                          MaterialRequest::Triple(TripleShape::Hadamard(n_out)));
    case LayerKind::kAvgPool:
      return {};
    case LayerKind::kX2Act:
      return {MaterialRequest::Pair(n_out)};
  }
  return {};
}

std::vector<MaterialRequest> PlanMaterial(const ModelSpec& m, WeightsMode mode) {
  const auto shapes = m.Shapes();
  std::vector<MaterialRequest> out;
  for (size_t i = 0; i < m.layers.size(); ++i) {
    auto r = PlanLayerMaterial(m.layers[i], shapes[i], mode);
    out.insert(out.end(), r.begin(), r.end());
  }
  return out;
}

std::pair<std::vector<SharedParams>, std::vector<SharedParams>> ShareWeights(
    const ModelSpec& m, Prg& rng) {
  std::vector<SharedParams> p0, p1;
  for (const auto& l : m.layers) {
    if (l.kind != LayerKind::kConv && l.kind != LayerKind::kFc) {
      p0.emplace_back();
      p1.emplace_back();
      continue;
    }
    auto [w0, w1] = Shr(FlatWeight(l), rng);
    auto [b0, b1] = Shr(l.bias, rng);
    p0.push_back({w0, b0});
    p1.push_back({w1, b1});
  }
  return {std::move(p0), std::move(p1)};
}

}  // namespace pinas
