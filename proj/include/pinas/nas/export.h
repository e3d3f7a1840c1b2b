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

#include "pinas/nas/supernet.h"

namespace pinas {

// Concrete model of one architecture: conv, activation and optional pool per
// gated layer, then fc. Weights are encoded in `ring`; layer names are
// <layer>, <layer>.act, <layer>.pool and fc.
ModelSpec ExportModel(const Supernet& net, const TensorSet& w, const Arch& arch,
                      RingConfig ring = {64, 16}, const std::string& name = "");

}  // namespace pinas
