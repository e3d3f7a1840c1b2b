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

#include <optional>
#include <string>
#include <vector>

#include "pinas/ring/fixed.h"

namespace pinas {

enum class LayerKind { kConv, kFc, kRelu, kMaxPool, kAvgPool, kX2Act };

const char* LayerKindName(LayerKind k);
LayerKind ParseLayerKind(const std::string& s);

// Trainable quadratic activation
//   y = (c / sqrt(n_x)) * w1 * x^2 + w2 * x + b.
struct X2ActCoeffs {
  double w1 = 0.0;
  double w2 = 1.0;
  double b = 0.0;
  double c = 1.0;
  double n_x = 1.0;  // fan-in of the preceding linear layer

  double scale() const;  // c * w1 / sqrt(n_x)
  double Eval(double x) const;
  // Global minimum over x for w1 > 0: b - w2^2 sqrt(n_x) / (4 c w1).
  double LowerBound() const;
};

// One layer. Activations use [C, H, W] (or [N] after an fc layer).
struct LayerSpec {
  LayerKind kind = LayerKind::kConv;
  std::string name;

  // conv / fc
  int64_t in_channels = 0;
  int64_t out_channels = 0;
  int64_t kernel_h = 1, kernel_w = 1;
  int64_t stride_h = 1, stride_w = 1;
  int64_t padding = 0;
  FixedTensor weight;  // conv: [OC, IC, KH, KW]; fc: [OUT, IN]
  FixedTensor bias;    // [OC]

  // maxpool / avgpool reuse kernel_* and stride_*.
  X2ActCoeffs x2act;

  static LayerSpec Conv(std::string name, FixedTensor w, FixedTensor b,
                        int64_t stride, int64_t padding);
  static LayerSpec Fc(std::string name, FixedTensor w, FixedTensor b);
  static LayerSpec Relu(std::string name);
  static LayerSpec MaxPool(std::string name, int64_t k, int64_t stride);
  static LayerSpec AvgPool(std::string name, int64_t k, int64_t stride);
  static LayerSpec X2Act(std::string name, X2ActCoeffs c);
};

// Output shape of the layer on input `in`; throws ShapeError on a mismatch.
Shape LayerOutputShape(const LayerSpec& layer, const Shape& in);

struct ModelSpec {
  std::string name;
  RingConfig ring{64, 16};
  Shape input_shape;
  std::vector<LayerSpec> layers;

  // Shape after each layer; element 0 is the input shape.
  std::vector<Shape> Shapes() const;
  // Throws ShapeError/ConfigError unless the layer chain is consistent.
  void Validate() const;
};

// JSON document referencing FXT1 weight files relative to the JSON file:
// {"name", "ring_bits", "frac_bits", "input_shape": [C,H,W],
//  "layers": [{"kind", "name", ...geometry..., "weight": "f.fxt",
//              "bias": "g.fxt", "x2act": {"w1","w2","b","c","n_x"}}]}
ModelSpec LoadModel(const std::string& json_path);
// Writes the JSON plus <stem>.<layer>.{w,b}.fxt next to it.
void SaveModel(const std::string& json_path, const ModelSpec& model);

// Replaces every relu with an identity-initialised x2act (n_x from the
// preceding linear layer) and every maxpool with an avgpool.
ModelSpec PolynomialVariant(const ModelSpec& model);
// Replaces every x2act with relu and every avgpool with maxpool.
ModelSpec BaselineVariant(const ModelSpec& model);

// Fan-in (IC*KH*KW or IN) of the nearest linear layer before index i.
double FanInBefore(const ModelSpec& model, size_t i);

}  // namespace pinas
