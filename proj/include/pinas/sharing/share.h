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

#include <random>
#include <utility>

#include "pinas/ring/fixed.h"

namespace pinas {

using Prg = std::mt19937_64;

inline RingElem RandomRing(Prg& rng, const RingConfig& cfg) {
  return cfg.Reduce(rng());
}

// One party's additive share of a FixedTensor.
struct Share {
  int party = 0;
  FixedTensor tensor;
  uint64_t session = 0;

  const Shape& shape() const { return tensor.shape(); }
  const RingConfig& config() const { return tensor.config(); }
  int64_t size() const { return tensor.size(); }
};

// (r, x - r) with r uniform over Z_{2^k}.
std::pair<Share, Share> Shr(const FixedTensor& x, Prg& rng, uint64_t session = 0);

// Elementwise sum of both parties' shares. Throws ShapeError on a shape,
// config or session mismatch, or when both shares claim the same party.
FixedTensor Rec(const Share& s0, const Share& s1);

// a*X + Y computed locally on one party's shares; no communication.
Share AddScale(RingElem a, const Share& x, const Share& y);

// Local linear helpers on a single party's shares.
Share ShareAdd(const Share& x, const Share& y);
Share ShareSub(const Share& x, const Share& y);
Share ShareNeg(const Share& x);
Share ShareScale(RingElem s, const Share& x);
// Adds a public tensor; only party 0 applies it.
Share AddPublic(const Share& x, const FixedTensor& c);
// Adds a public constant to every element; only party 0 applies it.
Share AddPublicScalar(const Share& x, RingElem c);
// Share of a public tensor: party 0 holds c, party 1 holds zeros.
Share PublicToShare(int party, const FixedTensor& c, uint64_t session = 0);
Share Reshaped(const Share& x, Shape shape);

}  // namespace pinas
