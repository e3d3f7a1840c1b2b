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

#include "pinas/nas/export.h"

#include "pinas/common/errors.h"

namespace pinas {

ModelSpec ExportModel(const Supernet& net, const TensorSet& w, const Arch& arch, RingConfig ring,
                      const std::string& name) {
  const SupernetSpec& spec = net.spec();
  if (arch.size() != spec.layers.size()) {
    throw ShapeError("architecture length differs from the supernet depth");
  }
  auto encode = [&](size_t idx) {
    return FixedTensor::FromReals(w.shapes[idx], w.values[idx], ring);
  };
  ModelSpec m;
  m.name = name.empty() ? spec.name + "-derived" : name;
  m.ring = ring;
  m.input_shape = spec.input_shape;
  for (size_t l = 0; l < spec.layers.size(); ++l) {
    const SupernetLayer& L = spec.layers[l];
    if (arch[l] < 0 || arch[l] >= int(L.candidates.size())) {
      throw ConfigError("candidate index out of range in layer " + L.name);
    }
    const Candidate& c = L.candidates[size_t(arch[l])];
    const auto& s = net.slot(l, size_t(arch[l]));
    m.layers.push_back(LayerSpec::Conv(L.name, encode(s.conv_w), encode(s.conv_b), L.stride,
                                       L.padding));
    if (c.act == LayerKind::kRelu) {
      m.layers.push_back(LayerSpec::Relu(L.name + ".act"));
    } else {
      X2ActCoeffs x;
      x.w1 = w.values[s.x2_w1][0];
      x.w2 = w.values[s.x2_w2][0];
      x.b = w.values[s.x2_b][0];
      x.c = net.options().x2act_c;
      x.n_x = net.X2ActFanIn(l);
      m.layers.push_back(LayerSpec::X2Act(L.name + ".act", x));
    }
    if (L.has_pool) {
      m.layers.push_back(c.pool == LayerKind::kMaxPool
                             ? LayerSpec::MaxPool(L.name + ".pool", L.pool_kernel, L.pool_stride)
                             : LayerSpec::AvgPool(L.name + ".pool", L.pool_kernel, L.pool_stride));
    }
  }
  m.layers.push_back(LayerSpec::Fc("fc", encode(net.fc_w()), encode(net.fc_b())));
  m.Validate();
  return m;
}

}  // namespace pinas
