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

#include "pinas/nas/supernet.h"

#include <cmath>
#include <map>

#include "pinas/common/errors.h"

namespace pinas {

X2ActCoeffs StpaiInit(Prg& rng, double c, double n_x) {
  std::normal_distribution<double> eta(0.0, 1.0);
  X2ActCoeffs x;
  x.w1 = 1e-4 * eta(rng);
  x.w2 = 1.0;
  x.b = 1e-4 * eta(rng);
  x.c = c;
  x.n_x = n_x;
  return x;
}

std::vector<std::vector<double>> ThetaOf(const TensorSet& alpha) {
  std::vector<std::vector<double>> out;
  for (const auto& a : alpha.values) {
    out.push_back(ad::Softmax(ad::Constant({int64_t(a.size())}, a)).value());
  }
  return out;
}

Supernet::Supernet(SupernetSpec spec, SupernetOptions opt)
    : spec_(std::move(spec)), opt_(opt) {
  spec_.Validate();
  geo_ = spec_.Geometry();
  auto add = [&](const std::string& name, Shape shape) {
    layout_.Append(name, shape, std::vector<double>(size_t(NumElements(shape)), 0.0));
    return layout_.count() - 1;
  };
  for (size_t l = 0; l < spec_.layers.size(); ++l) {
    const auto& L = spec_.layers[l];
    const Shape w_shape{L.out_channels, geo_[l].in_channels, L.kernel, L.kernel};
    std::vector<SlotParams> slots;
    for (size_t k = 0; k < L.candidates.size(); ++k) {
      if (!opt_.separate_weights && k > 0) {
        slots.push_back(slots[0]);
        continue;
      }
      const std::string p =
          opt_.separate_weights ? L.name + ".k" + std::to_string(k) + "." : L.name + ".";
      SlotParams s;
      s.conv_w = add(p + "w", w_shape);
      s.conv_b = add(p + "b", {L.out_channels});
      s.x2_w1 = add(p + "x2.w1", {1});
      s.x2_w2 = add(p + "x2.w2", {1});
      s.x2_b = add(p + "x2.b", {1});
      slots.push_back(s);
    }
    slots_.push_back(std::move(slots));
  }
  const auto& last = geo_.back();
  const int64_t flat = spec_.layers.back().out_channels * last.out_size * last.out_size;
  fc_w_ = add("fc.w", {spec_.num_classes, flat});
  fc_b_ = add("fc.b", {spec_.num_classes});
}

double Supernet::X2ActFanIn(size_t layer) const {
  const auto& L = spec_.layers.at(layer);
  return double(geo_[layer].in_channels * L.kernel * L.kernel);
}

const Supernet::SlotParams& Supernet::slot(size_t layer, size_t candidate) const {
  return slots_.at(layer).at(candidate);
}

TensorSet Supernet::InitWeights(Prg& rng) const {
  TensorSet w = layout_;
  std::normal_distribution<double> nd(0.0, 1.0);
  auto fill = [&](size_t idx, double stddev) {
    for (auto& e : w.values[idx]) e = stddev * nd(rng);
  };
  for (size_t l = 0; l < spec_.layers.size(); ++l) {
    for (size_t k = 0; k < slots_[l].size(); ++k) {
      if (!opt_.separate_weights && k > 0) break;
      const SlotParams& s = slots_[l][k];
      fill(s.conv_w, std::sqrt(2.0 / X2ActFanIn(l)));
      const X2ActCoeffs c = StpaiInit(rng, opt_.x2act_c, X2ActFanIn(l));
      w.values[s.x2_w1][0] = c.w1;
      w.values[s.x2_w2][0] = c.w2;
      w.values[s.x2_b][0] = c.b;
    }
  }
  fill(fc_w_, std::sqrt(1.0 / double(w.shapes[fc_w_][1])));
  return w;
}

TensorSet Supernet::InitAlpha() const {
  TensorSet a;
  for (const auto& L : spec_.layers) {
    const int64_t k = int64_t(L.candidates.size());
    a.Append(L.name + ".alpha", {k}, std::vector<double>(size_t(k), 0.0));
  }
  return a;
}

std::vector<ad::Var> Supernet::GatedTheta(const std::vector<ad::Var>& alpha) const {
  if (alpha.size() != spec_.layers.size()) throw ShapeError("one alpha vector per layer");
  std::vector<ad::Var> out;
  for (const auto& a : alpha) out.push_back(ad::Softmax(a));
  return out;
}

std::vector<ad::Var> Supernet::BlendTheta(const Arch& baseline, const Arch& target,
                                          double s) const {
  if (baseline.size() != spec_.layers.size() || target.size() != spec_.layers.size()) {
    throw ShapeError("architecture length differs from the supernet depth");
  }
  if (!(s >= 0.0 && s <= 1.0)) throw ConfigError("replacement ratio outside [0, 1]");
  std::vector<ad::Var> out;
  for (size_t l = 0; l < baseline.size(); ++l) {
    const int64_t k = int64_t(spec_.layers[l].candidates.size());
    if (baseline[l] < 0 || baseline[l] >= k || target[l] < 0 || target[l] >= k) {
      throw ConfigError("candidate index out of range in layer " + spec_.layers[l].name);
    }
    std::vector<double> t(size_t(k), 0.0);
    t[size_t(baseline[l])] += 1.0 - s;
    t[size_t(target[l])] += s;
    out.push_back(ad::Constant({k}, t));
  }
  return out;
}

std::vector<ad::Var> Supernet::FixedTheta(const Arch& arch) const {
  return BlendTheta(arch, arch, 0.0);
}

ad::Var Supernet::Forward(const std::vector<ad::Var>& w, const std::vector<ad::Var>& theta,
                          const ad::Var& x) const {
  if (w.size() != layout_.count()) throw ShapeError("weight leaf count differs from layout");
  if (theta.size() != spec_.layers.size()) throw ShapeError("one theta vector per layer");
  ad::Var h = x;
  for (size_t l = 0; l < spec_.layers.size(); ++l) {
    const auto& L = spec_.layers[l];
    const ad::Var& th = theta[l];
    if (th.size() != int64_t(L.candidates.size())) {
      throw ShapeError("layer " + L.name + ": theta has the wrong length");
    }
    const bool fixed = !th.requires_grad();
    std::vector<ad::Var> outs;
    std::vector<double> kept;
    std::map<LayerKind, ad::Var> act_memo;  // shared-weight activations
    ad::Var conv;
    for (size_t k = 0; k < L.candidates.size(); ++k) {
      if (fixed && th.value()[k] == 0.0) continue;
      const SlotParams& s = slots_[l][k];
      const Candidate& cand = L.candidates[k];
      ad::Var a;
      if (!opt_.separate_weights && act_memo.count(cand.act)) {
        a = act_memo[cand.act];
      } else {
        if (opt_.separate_weights || !conv.node()) {
          conv = ad::Conv2d(h, w[s.conv_w], w[s.conv_b], L.stride, L.padding);
        }
        if (cand.act == LayerKind::kRelu) {
          a = ad::Relu(conv);
        } else {
          const double k2 = opt_.x2act_c / std::sqrt(X2ActFanIn(l));
          a = ad::X2Act(conv, w[s.x2_w1], w[s.x2_w2], w[s.x2_b], k2);
        }
        if (!opt_.separate_weights) act_memo[cand.act] = a;
      }
      if (L.has_pool) {
        a = cand.pool == LayerKind::kMaxPool ? ad::MaxPool2d(a, L.pool_kernel, L.pool_stride)
                                             : ad::AvgPool2d(a, L.pool_kernel, L.pool_stride);
      }
      outs.push_back(a);
      kept.push_back(th.value()[k]);
    }
    if (outs.empty()) throw ConfigError("layer " + L.name + ": every candidate has weight 0");
    if (!fixed) {
      h = ad::WeightedSum(outs, th);
    } else if (outs.size() == 1 && kept[0] == 1.0) {
      h = outs[0];
    } else {
      h = ad::WeightedSum(outs, ad::Constant({int64_t(kept.size())}, kept));
    }
  }
  const int64_t batch = h.shape()[0];
  h = ad::Reshape(h, {batch, h.size() / batch});
  return ad::Linear(h, w[fc_w_], w[fc_b_]);
}

double Accuracy(const Supernet& net, const TensorSet& w, const Arch& arch, const Dataset& d) {
  if (d.size() == 0) return 0.0;
  const auto leaves = w.Leaves();
  const auto theta = net.FixedTheta(arch);
  int64_t correct = 0;
  const int64_t chunk = 256;
  for (int64_t start = 0; start < d.size(); start += chunk) {
    std::vector<int64_t> idx;
    for (int64_t i = start; i < std::min(d.size(), start + chunk); ++i) idx.push_back(i);
    const Dataset part = d.Subset(idx);
    const ad::Var logits = net.Forward(leaves, theta, part.Input());
    const int64_t k = logits.shape()[1];
    for (int64_t i = 0; i < part.size(); ++i) {
      const double* row = &logits.value()[size_t(i * k)];
      const int64_t best = std::max_element(row, row + k) - row;
      correct += best == part.y[size_t(i)];
    }
  }
  return double(correct) / double(d.size());
}

}  // namespace pinas
