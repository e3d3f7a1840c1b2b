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

#include "pinas/ops/secure_ops.h"

namespace pinas {

struct LayerStats {
  std::string name;
  LayerKind kind = LayerKind::kConv;
  int rounds = 0;
  uint64_t payload_sent = 0;
  uint64_t payload_recv = 0;
  double seconds = 0.0;
};

struct RunOptions {
  WeightsMode mode = WeightsMode::kPublic;
  OtGroup group = OtGroup::Default();
  // Required in shared mode: this party's parameter shares, one per layer.
  const std::vector<SharedParams>* shared = nullptr;
};

// Evaluates every layer on shares; appends one LayerStats per layer.
Share RunModel(Party& p, const ModelSpec& m, const Share& x, const RunOptions& opt,
               std::vector<LayerStats>* stats = nullptr);

// One party's side of a full session. Party 0 owns the input (pass it;
// party 1 passes null), shares it in one message, both run the model and
// party 1 returns its logit share to party 0, which reconstructs.
struct SessionResult {
  FixedTensor logits;  // party 0 only
  std::vector<LayerStats> layers;
};
SessionResult SecureInference(Party& p, const ModelSpec& m, const FixedTensor* input,
                              const RunOptions& opt);

// Both parties on two threads over in-process channels, with dealer
// material from `dealer_seed`.
struct InProcResult {
  FixedTensor logits;
  std::vector<LayerStats> layers;
  Transcript transcript;  // party 0's view
};
InProcResult RunInProc(const ModelSpec& m, const FixedTensor& input, uint64_t dealer_seed,
                       uint64_t protocol_seed, RunOptions opt = {});

// Session parameters both parties must agree on.
struct SessionInfo {
  RingConfig ring;
  uint64_t model_digest = 0;
  uint8_t weights_mode = 0;
};
uint64_t ModelDigest(const ModelSpec& m);

// Exchanges SessionInfo, throws ConfigError on any mismatch, then clears the
// channel's accounting so handshake bytes are not charged to the protocol.
void Handshake(Channel& ch, const SessionInfo& mine);

int ArgMax(const FixedTensor& logits);

}  // namespace pinas
