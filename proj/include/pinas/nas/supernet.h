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

#include "pinas/nas/dataset.h"
#include "pinas/nas/supernet_spec.h"
#include "pinas/nas/tensor_set.h"
#include "pinas/sharing/share.h"

namespace pinas {

// One chosen candidate index per gated layer.
using Arch = std::vector<int>;

struct SupernetOptions {
  // Separate conv weights and x2act coefficients per candidate instead of
  // one set shared by all candidates of a slot.
  bool separate_weights = false;
  double x2act_c = 1.0;
};

// Near-identity x2act start: w1, b ~ 1e-4 N(0,1), w2 = 1.
X2ActCoeffs StpaiInit(Prg& rng, double c = 1.0, double n_x = 1.0);

// Softmax of each layer's logits.
std::vector<std::vector<double>> ThetaOf(const TensorSet& alpha);

class Supernet {
 public:
  explicit Supernet(SupernetSpec spec, SupernetOptions opt = {});

  const SupernetSpec& spec() const { return spec_; }
  const SupernetOptions& options() const { return opt_; }

  // He-normal conv, scaled-normal fc, STPAI x2act coefficients.
  TensorSet InitWeights(Prg& rng) const;
  // Zero logits, one [K] tensor per gated layer.
  TensorSet InitAlpha() const;

  // Fan-in seen by layer l's x2act (IC * K * K of its conv).
  double X2ActFanIn(size_t layer) const;

  // Logits [B, classes] for a batch. `w` holds leaves in InitWeights order;
  // `theta` one [K] mixing vector per layer. Candidates whose weight is a
  // constant zero are skipped.
  ad::Var Forward(const std::vector<ad::Var>& w, const std::vector<ad::Var>& theta,
                  const ad::Var& x) const;

  // Mixing vectors.
  std::vector<ad::Var> GatedTheta(const std::vector<ad::Var>& alpha) const;
  std::vector<ad::Var> FixedTheta(const Arch& arch) const;
  // (1 - s) * baseline + s * target per layer.
  std::vector<ad::Var> BlendTheta(const Arch& baseline, const Arch& target, double s) const;

  // Index of the weight tensors of one layer / candidate.
  struct SlotParams {
    size_t conv_w, conv_b, x2_w1, x2_w2, x2_b;
  };
  const SlotParams& slot(size_t layer, size_t candidate) const;
  size_t fc_w() const { return fc_w_; }
  size_t fc_b() const { return fc_b_; }

 private:
  SupernetSpec spec_;
  SupernetOptions opt_;
  std::vector<SupernetSpec::SlotGeometry> geo_;
  std::vector<std::vector<SlotParams>> slots_;  // [layer][candidate]
  size_t fc_w_ = 0, fc_b_ = 0;
  TensorSet layout_;
};

// Fraction of samples whose argmax logit equals the label.
double Accuracy(const Supernet& net, const TensorSet& w, const Arch& arch, const Dataset& d);

}  // namespace pinas
