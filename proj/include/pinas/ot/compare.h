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

#include "pinas/ot/oblivious_transfer.h"

namespace pinas {

// Splits comparison operands into 2-bit chunks, one 1-of-4 OT per chunk.
struct ChunkDecomposition {
  int chunk_bits = 2;
  int parts = 16;
  int index_list_len = 4;

  static ChunkDecomposition ForRing(int ring_bits);
};

// Arithmetic shares of a 0/1 indicator.
using CmpShare = Share;

// Shares of 1{x >= 0} per element (so DReLU(0) = 1). Four rounds:
//   1. S0 -> S1: OT setup element S.
//   2. S1 -> S0: R list, one element per chunk.
//   3. S0 -> S1: four ciphertexts per chunk.
//   4. S0 -> S1: one ring word per element converting the result to
//      arithmetic shares.
// Party 0 holds the low k-1 bits of its share as a and party 1 holds
// b = 2^{k-1} - 1 - (low bits of its share); the carry into the sign bit is
// 1{a > b}. Each OT delivers one row pair of a garbled comparison chain
// evaluated from the least significant chunk up. Party 1's sign bit rides in
// the unused top position of its last chunk. Needs no dealer material.
CmpShare Drelu(Party& p, const Share& x, const OtGroup& group = OtGroup::Default());

// Shares of the strict comparison 1{x > y} = 1 - DReLU(y - x).
CmpShare SecureCmp(Party& p, const Share& x, const Share& y,
                   const OtGroup& group = OtGroup::Default());

}  // namespace pinas
