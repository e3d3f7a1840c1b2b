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

#include "pinas/common/errors.h"
#include "pinas/sharing/beaver.h"
#include "pinas/transport/channel.h"

namespace pinas {

// Everything one party needs to run an interactive protocol: its channel,
// private randomness and dealer material. Not thread-safe; one per session.
class Party {
 public:
  Party(Channel& ch, uint64_t seed, MaterialStore* material = nullptr)
      : ch_(&ch), rng_(seed * 2 + uint64_t(ch.role())), material_(material) {}

  int id() const { return ch_->role(); }
  Channel& channel() { return *ch_; }
  Prg& rng() { return rng_; }
  MaterialStore& material() {
    if (material_ == nullptr) throw ExhaustedError("party has no dealer material");
    return *material_;
  }
  void set_material(MaterialStore* m) { material_ = m; }

 private:
  Channel* ch_;
  Prg rng_;
  MaterialStore* material_;
};

}  // namespace pinas
