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

#include "pinas/sharing/party.h"

namespace pinas {

// Secure product with one dealer triple and a single exchange round:
// E = X - A and F = Y - B are opened jointly, then party i returns
//   -i * E(x)F + X_i(x)F + E(x)Y_i + Z_i.
// MatMul expects X:[m,k], Y:[k,n]. Hadamard accepts any equal shapes.
// Throws ShapeError on a triple mismatch and ReuseError if the triple was
// already consumed.
Share BeaverMul(Party& p, const Share& x, const Share& y, ProductKind kind,
                const BeaverTriple& t);
// Pops the next triple from the party's material store.
Share BeaverMul(Party& p, const Share& x, const Share& y, ProductKind kind);

// Elementwise square with a dealer pair: E = X - A is opened and party i
// returns Z_i + 2 E.A_i, plus E.E on party 0 only.
Share BeaverSquare(Party& p, const Share& x, const BeaverPair& pair);
Share BeaverSquare(Party& p, const Share& x);

// Local probabilistic truncation by `bits`: party 0 shifts its share
// arithmetically, party 1 shifts the negation and negates back. The result
// is off by at most one unit except with probability <= |x| / 2^{k-1}.
Share Truncate(const Share& x, int bits);

// Opens a shared tensor to both parties in one round.
FixedTensor Open(Party& p, const Share& x);

}  // namespace pinas
