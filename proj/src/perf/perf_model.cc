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

#include "pinas/perf/perf_model.h"

#include <cmath>

#include "pinas/common/errors.h"

namespace pinas {
namespace {

constexpr double kWordBits = 32;

double Elements(const OpGeometry& g) { return double(g.elements()); }

void CheckGeometry(const OpGeometry& g) {
  if (g.fi <= 0 || g.ic <= 0) throw ShapeError("geometry needs FI > 0 and IC > 0");
}

}  // namespace

void HwProfile::Validate() const {
  for (double v : {pp, freq_hz, rt_bw_bytes_per_s}) {
    if (!(v > 0) || !std::isfinite(v)) {
      throw ConfigError("hardware profile values must be positive and finite");
    }
  }
  if (!(t_bc_s >= 0) || !std::isfinite(t_bc_s)) throw ConfigError("t_bc_s must be >= 0");
}

uint64_t Comm1PayloadBits() { return 32; }
uint64_t Comm2PayloadBits(const OpGeometry& g) { return 32ull * 16 * uint64_t(g.elements()); }
uint64_t Comm3PayloadBits(const OpGeometry& g) {
  return 32ull * 4 * 16 * uint64_t(g.elements());
}
uint64_t Comm4PayloadBits(const OpGeometry& g) { return 32ull * uint64_t(g.elements()); }

OtFlowCosts ComputeOtFlowCosts(const OpGeometry& g, const HwProfile& h) {
  CheckGeometry(g);
  const double n = Elements(g);
  const double ops = h.ops_per_s();
  const double bw = h.rt_bw_bits();
  OtFlowCosts c;
  c.cmp2 = 32.0 * 17.0 * n / ops;
  c.cmp3 = 32.0 * (17.0 + 4.0 * 16.0) * n / ops;
  c.cmp4 = (32.0 * 4.0 * 16.0 + 1.0) * n / ops;
  c.comm1 = h.t_bc_s + double(Comm1PayloadBits()) / bw;
  c.comm2 = h.t_bc_s + double(Comm2PayloadBits(g)) / bw;
  c.comm3 = h.t_bc_s + double(Comm3PayloadBits(g)) / bw;
  c.comm4 = h.t_bc_s + double(Comm4PayloadBits(g)) / bw;
  return c;
}

double LatRelu(const OpGeometry& g, const HwProfile& h) {
  const OtFlowCosts c = ComputeOtFlowCosts(g, h);
  return c.cmp_total() + c.comm_total();
}

double LatMaxPool(const OpGeometry& g, const HwProfile& h) {
  return LatRelu(g, h) + 3.0 * h.t_bc_s;
}

double CmpX2Act(const OpGeometry& g, const HwProfile& h) {
  CheckGeometry(g);
  // square, two scalings and the add per element
  return 4.0 * Elements(g) / h.ops_per_s();
}

double CommX2Act(const OpGeometry& g, const HwProfile& h) {
  CheckGeometry(g);
  return h.t_bc_s + kWordBits * Elements(g) / h.rt_bw_bits();
}

double LatX2Act(const OpGeometry& g, const HwProfile& h) {
  return CmpX2Act(g, h) + 2.0 * CommX2Act(g, h);
}

double LatAvgPool(const OpGeometry& g, const HwProfile& h) {
  CheckGeometry(g);
  return 2.0 * Elements(g) / h.ops_per_s();
}

double CmpConv(const OpGeometry& g, const HwProfile& h) {
  CheckGeometry(g);
  const double o = double(g.out_size());
  const double macs = double(g.oc) * double(g.ic) * double(g.kernel * g.kernel) * o * o;
  return macs / h.ops_per_s();
}

double CommConv(const OpGeometry& g, const HwProfile& h) {
  CheckGeometry(g);
  const double o = double(g.out_size());
  const double kk = double(g.ic) * double(g.kernel * g.kernel);
  const double words = kk * o * o + double(g.oc) * kk;
  return h.t_bc_s + kWordBits * words / h.rt_bw_bits();
}

double LatConv(const OpGeometry& g, const HwProfile& h) {
  return CmpConv(g, h) + 2.0 * CommConv(g, h);
}

double LatFc(int64_t in, int64_t out, const HwProfile& h) {
  return LatConv(OpGeometry{1, in, out, 1, 1, 0}, h);
}

std::vector<LayerLatency> ModelLatency(const ModelSpec& m, const HwProfile& h) {
  h.Validate();
  const auto shapes = m.Shapes();
  std::vector<LayerLatency> out;
  for (size_t i = 0; i < m.layers.size(); ++i) {
    const LayerSpec& l = m.layers[i];
    const Shape& in = shapes[i];
    OpGeometry g;
    if (in.size() == 3) {
      g.fi = in[1];
      g.ic = in[0];
    } else {
      g.fi = 1;
      g.ic = NumElements(in);
    }
    double s = 0;
    switch (l.kind) {
      case LayerKind::kConv:
        g.oc = l.out_channels;
        g.kernel = l.kernel_h;
        g.stride = l.stride_h;
        g.padding = l.padding;
        s = LatConv(g, h);
        break;
      case LayerKind::kFc:
        g = OpGeometry{1, l.in_channels, l.out_channels, 1, 1, 0};
        s = LatConv(g, h);
        break;
      case LayerKind::kRelu:
        s = LatRelu(g, h);
        break;
      case LayerKind::kMaxPool:
        s = LatMaxPool(g, h);
        break;
      case LayerKind::kAvgPool:
        s = LatAvgPool(g, h);
        break;
      case LayerKind::kX2Act:
        s = LatX2Act(g, h);
        break;
    }
    out.push_back({l.name, l.kind, g, s});
  }
  return out;
}

double TotalLatency(const std::vector<LayerLatency>& layers) {
  double t = 0;
  for (const auto& l : layers) t += l.seconds;
  return t;
}

}  // namespace pinas
