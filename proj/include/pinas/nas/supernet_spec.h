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

// One candidate of a gated slot: an activation, optionally followed by a
// pooling operator.
struct Candidate {
  LayerKind act = LayerKind::kRelu;
  LayerKind pool = LayerKind::kMaxPool;  // ignored when the slot has no pool

  std::string Label(bool with_pool) const;
};

// Conv followed by a gated Act (and Pool) choice.
struct SupernetLayer {
  std::string name;
  int64_t out_channels = 0;
  int64_t kernel = 3;
  int64_t stride = 1;
  int64_t padding = 1;
  bool has_pool = false;
  int64_t pool_kernel = 2;
  int64_t pool_stride = 2;
  std::vector<Candidate> candidates;
};

struct SupernetSpec {
  std::string name;
  Shape input_shape;  // [C, H, W]
  int64_t num_classes = 2;
  std::vector<SupernetLayer> layers;

  // Candidate lists {relu, x2act} x {maxpool, avgpool} or {relu, x2act}.
  static std::vector<Candidate> ActPoolCandidates();
  static std::vector<Candidate> ActCandidates();

  // Input 1x8x8; conv 4 + {relu,x2act}x{max,avg} pool; conv 8 + {relu,x2act};
  // fc to `classes`.
  static SupernetSpec Toy(int64_t classes = 4);
  // Four Conv-Act(-Pool) blocks on 3x16x16 inputs.
  static SupernetSpec MiniVgg(int64_t classes = 4);

  // Geometry seen by the activation and pool of layer l: {FI, IC}.
  struct SlotGeometry {
    int64_t in_channels = 0;
    int64_t in_size = 0;    // spatial size entering the conv
    int64_t act_size = 0;   // spatial size after the conv
    int64_t out_size = 0;   // after the optional pool
  };
  std::vector<SlotGeometry> Geometry() const;
  void Validate() const;
};

// {"name", "input_shape": [C,H,W], "num_classes",
//  "layers": [{"name", "out_channels", "kernel", "stride", "padding",
//              "pool": {"kernel", "stride"} (optional),
//              "candidates": ["relu+maxpool", "x2act", ...]}]}
std::string SupernetSpecToJson(const SupernetSpec& s);
SupernetSpec SupernetSpecFromJson(const std::string& text);
SupernetSpec LoadSupernetSpec(const std::string& path);
void SaveSupernetSpec(const std::string& path, const SupernetSpec& s);
// "toy", "mini-vgg" or a JSON file path.
SupernetSpec ResolveBackbone(const std::string& name_or_path, int64_t classes);

}  // namespace pinas
