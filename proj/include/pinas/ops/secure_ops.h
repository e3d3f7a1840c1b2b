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

#include <vector>

#include "pinas/ops/model.h"
#include "pinas/ot/compare.h"
#include "pinas/sharing/protocols.h"

namespace pinas {

// Public: both servers know the weights, so linear layers are local.
// Shared: weights are secret-shared and multiplied with a matmul triple.
enum class WeightsMode { kPublic, kShared };

const char* WeightsModeName(WeightsMode m);
WeightsMode ParseWeightsMode(const std::string& s);

// One party's share of a linear layer's parameters.
struct SharedParams {
  Share weight;  // [OC, IC*KH*KW] or [OUT, IN]
  Share bias;    // [OC]
};

// Convolution and fully connected layers: im2col-lowered product,
// truncation by f, bias added by party 0.
Share Conv2pc(Party& p, const Share& x, const LayerSpec& l);
Share Conv2pc(Party& p, const Share& x, const LayerSpec& l, const SharedParams& w);
Share Fc2pc(Party& p, const Share& x, const LayerSpec& l);
Share Fc2pc(Party& p, const Share& x, const LayerSpec& l, const SharedParams& w);

// x * DReLU(x): one comparison flow plus one elementwise product.
Share Relu2pc(Party& p, const Share& x, const OtGroup& group = OtGroup::Default());

// Row-major tournament over each window: cur <- b * (s_t - cur) + cur
// with b = 1{s_t > cur}. One comparison and one product per window slot.
Share MaxPool2pc(Party& p, const Share& x, const LayerSpec& l,
                 const OtGroup& group = OtGroup::Default());

// Window sum times encode(1 / (KH*KW)), then truncation. No messages.
Share AvgPool2pc(const Share& x, const LayerSpec& l);

// One square with a dealer pair, public scalings and two truncations.
Share X2Act2pc(Party& p, const Share& x, const LayerSpec& l);

// Dealer requests consumed by one layer (in order) and by a whole model.
std::vector<MaterialRequest> PlanLayerMaterial(const LayerSpec& l, const Shape& in,
                                               WeightsMode mode);
std::vector<MaterialRequest> PlanMaterial(const ModelSpec& m, WeightsMode mode);

// Splits every linear layer's parameters between the two parties.
std::pair<std::vector<SharedParams>, std::vector<SharedParams>> ShareWeights(
    const ModelSpec& m, Prg& rng);

}  // namespace pinas
