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

#pragma once

#include <string>
#include <vector>

#include "pinas/ops/model.h"

namespace pinas {

// Hardware profile of the two servers and their link.
struct HwProfile {
  std::string id = "default";
  double pp = 4;                      // parallel processing lanes
  double freq_hz = 2e8;               // kernel clock
  double rt_bw_bytes_per_s = 1e9;     // link bandwidth
  double t_bc_s = 50e-6;              // base latency per message

  void Validate() const;
  double rt_bw_bits() const { return 8.0 * rt_bw_bytes_per_s; }
  double ops_per_s() const { return pp * freq_hz; }
};

// FI is the input spatial size, IC the input channels. Conv extras are used
// by the conv cost model only.
struct OpGeometry {
  int64_t fi = 1;
  int64_t ic = 1;
  int64_t oc = 1;
  int64_t kernel = 1;
  int64_t stride = 1;
  int64_t padding = 0;

  int64_t elements() const { return fi * fi * ic; }
  int64_t out_size() const { return (fi + 2 * padding - kernel) / stride + 1; }
};

// Payload bits of each comparison-flow step.
uint64_t Comm1PayloadBits();
uint64_t Comm2PayloadBits(const OpGeometry& g);
uint64_t Comm3PayloadBits(const OpGeometry& g);
uint64_t Comm4PayloadBits(const OpGeometry& g);

struct OtFlowCosts {
  double cmp2 = 0, cmp3 = 0, cmp4 = 0;
  double comm1 = 0, comm2 = 0, comm3 = 0, comm4 = 0;

  double cmp_total() const { return cmp2 + cmp3 + cmp4; }
  double comm_total() const { return comm1 + comm2 + comm3 + comm4; }
};
OtFlowCosts ComputeOtFlowCosts(const OpGeometry& g, const HwProfile& h);

double LatRelu(const OpGeometry& g, const HwProfile& h);
double LatMaxPool(const OpGeometry& g, const HwProfile& h);
double LatX2Act(const OpGeometry& g, const HwProfile& h);
double LatAvgPool(const OpGeometry& g, const HwProfile& h);
// CMP_conv + 2 COMM_conv with CMP_conv = MACs / (PP freq) and COMM_conv
// carrying the opened E (im2col input) and F (weights) at 32 bits each.
double LatConv(const OpGeometry& g, const HwProfile& h);
// Fully connected layer as a 1x1 conv on a 1x1 input with IC = IN.
double LatFc(int64_t in, int64_t out, const HwProfile& h);

// Named parts of the extended models.
double CmpX2Act(const OpGeometry& g, const HwProfile& h);
double CommX2Act(const OpGeometry& g, const HwProfile& h);
double CmpConv(const OpGeometry& g, const HwProfile& h);
double CommConv(const OpGeometry& g, const HwProfile& h);

struct LayerLatency {
  std::string name;
  LayerKind kind = LayerKind::kConv;
  OpGeometry geometry;
  double seconds = 0.0;
};

// Predicted latency of every layer; the total is their sum.
std::vector<LayerLatency> ModelLatency(const ModelSpec& m, const HwProfile& h);
double TotalLatency(const std::vector<LayerLatency>& layers);

}  // namespace pinas
