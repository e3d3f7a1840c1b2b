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

#include <cstdint>
#include <span>
#include <vector>

#include "pinas/ot/ot_group.h"
#include "pinas/sharing/party.h"

namespace pinas {

// Batched 1-of-L oblivious transfer of 32-bit messages. Party 0 sends,
// party 1 receives. The sender publishes S = g^rd once; for transfer t with
// choice c the receiver answers R_t = g^{y_t} S^c, and the sender encrypts
// message j under H((R_t / S^j)^rd, t, j). Only index c decrypts under the
// receiver's key H(S^{y_t}, t, c).

inline constexpr int kOtWordBytes = 4;

// 32-bit pad derived from a group element, transfer index and message index.
uint32_t OtPad(uint64_t key, uint64_t transfer, int j);

// Key material, exposed for tests.
uint64_t OtSenderKey(const OtGroup& g, const OtSetup& setup, uint64_t r, int j);
uint64_t OtReceiverKey(const OtGroup& g, uint64_t s, uint64_t y);

// Local halves of the transfer. `messages` is laid out [transfer][L].
std::vector<uint64_t> OtReceiverChoose(const OtGroup& g, uint64_t s,
                                       std::span<const uint8_t> choices, int L,
                                       Prg& rng, std::vector<uint64_t>* secrets);
std::vector<uint64_t> OtSenderEncrypt(const OtGroup& g, const OtSetup& setup,
                                      std::span<const uint64_t> r_list,
                                      std::span<const uint32_t> messages, int L);
std::vector<uint32_t> OtReceiverDecrypt(const OtGroup& g, uint64_t s,
                                        std::span<const uint64_t> secrets,
                                        std::span<const uint8_t> choices,
                                        std::span<const uint64_t> ciphertexts,
                                        int L);

// Interactive steps. Setup is one round carrying a single 32-bit word; the
// transfer is two rounds (R list, then ciphertexts).
// Party 0 passes its setup (filled in) and gets S back; party 1 passes null.
uint64_t OtExchangeSetup(Party& p, const OtGroup& g, OtSetup* sender_setup);
void OtSendBatch(Party& p, const OtGroup& g, const OtSetup& setup,
                 std::span<const uint32_t> messages, int L);
std::vector<uint32_t> OtReceiveBatch(Party& p, const OtGroup& g, uint64_t s,
                                     std::span<const uint8_t> choices, int L);

}  // namespace pinas
