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

#include "pinas/common/bytes.h"
#include "pinas/ring/fixed.h"

namespace pinas {

// FXT1 layout, little-endian:
//   "FXT1" | u8 ring_bits | u8 frac_bits | u8 ndim | u32 extents[ndim] |
//   elements, ceil(ring_bits/8) bytes each.
Bytes SerializeTensor(const FixedTensor& t);
FixedTensor ParseTensor(std::span<const uint8_t> data);

void SaveTensor(const std::string& path, const FixedTensor& t);
FixedTensor LoadTensor(const std::string& path);

}  // namespace pinas
