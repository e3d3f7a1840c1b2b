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

namespace pinas {

// Lowers a [C,H,W] tensor to [C*KH*KW, OH*OW] columns with zero padding.
// Linear, so it applies to shares as well as plaintext.
FixedTensor Im2Col(const FixedTensor& x, const LayerSpec& l);

// KH*KW tensors of shape [C,OH,OW]; entry t holds window element t in
// row-major window order.
std::vector<FixedTensor> PoolWindows(const FixedTensor& x, const LayerSpec& l);

// Ring constants of an x2act layer: encode(c*w1/sqrt(n_x)), encode(w2),
// encode(b).
struct X2ActRing {
  RingElem a = 0, w2 = 0, b = 0;
};
X2ActRing X2ActConstants(const X2ActCoeffs& c, const RingConfig& cfg);

// Fixed-point reference that mirrors the secure operators with exact
// floor truncation in place of the probabilistic one.
FixedTensor PlainLayer(const LayerSpec& l, const FixedTensor& x);
FixedTensor PlainForward(const ModelSpec& m, const FixedTensor& x,
                         std::vector<FixedTensor>* trace = nullptr);

// Real-valued forward pass on decoded weights.
std::vector<double> FloatForward(const ModelSpec& m, const std::vector<double>& x);

}  // namespace pinas
