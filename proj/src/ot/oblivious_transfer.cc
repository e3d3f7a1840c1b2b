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

#include "pinas/ot/oblivious_transfer.h"

#include "pinas/common/errors.h"
#include "pinas/ot/hash.h"

namespace pinas {

uint32_t OtPad(uint64_t key, uint64_t transfer, int j) {
  return uint32_t(Mix64(Mix64(key ^ 0x6f74706164ULL) ^ (transfer << 3) ^ uint64_t(j)));
}

uint64_t OtSenderKey(const OtGroup& g, const OtSetup& setup, uint64_t r, int j) {
  const uint64_t s_j = ModPow(setup.s, uint64_t(j), g.modulus);
  const uint64_t base = ModMul(r, ModInverse(s_j, g.modulus), g.modulus);
  return ModPow(base, setup.rd, g.modulus);
}

uint64_t OtReceiverKey(const OtGroup& g, uint64_t s, uint64_t y) {
  return ModPow(s, y, g.modulus);
}

std::vector<uint64_t> OtReceiverChoose(const OtGroup& g, uint64_t s,
                                       std::span<const uint8_t> choices, int L,
                                       Prg& rng, std::vector<uint64_t>* secrets) {
  std::vector<uint64_t> s_pow(size_t(L), 1);
  for (int j = 1; j < L; ++j) s_pow[j] = ModMul(s_pow[j - 1], s, g.modulus);
  std::uniform_int_distribution<uint64_t> dist(1, g.modulus - 2);
  std::vector<uint64_t> r_list(choices.size());
  secrets->resize(choices.size());
  for (size_t t = 0; t < choices.size(); ++t) {
    if (choices[t] >= L) throw ShapeError("OT choice out of range");
    const uint64_t y = dist(rng);
    (*secrets)[t] = y;
    r_list[t] = ModMul(ModPow(g.generator, y, g.modulus), s_pow[choices[t]], g.modulus);
  }
  return r_list;
}

std::vector<uint64_t> OtSenderEncrypt(const OtGroup& g, const OtSetup& setup,
                                      std::span<const uint64_t> r_list,
                                      std::span<const uint32_t> messages, int L) {
  if (messages.size() != r_list.size() * size_t(L)) {
    throw ProtocolError("malformed R list: " + std::to_string(r_list.size()) +
                        " entries for " + std::to_string(messages.size()) +
                        " messages");
  }
  // k_j = R^rd * (S^rd)^-j
  const uint64_t w_inv = ModInverse(ModPow(setup.s, setup.rd, g.modulus), g.modulus);
  std::vector<uint64_t> out(messages.size());
  for (size_t t = 0; t < r_list.size(); ++t) {
    const uint64_t r = r_list[t] % g.modulus;
    if (r == 0) throw ProtocolError("malformed R list entry");
    uint64_t key = ModPow(r, setup.rd, g.modulus);
    for (int j = 0; j < L; ++j) {
      out[t * L + j] = messages[t * L + j] ^ OtPad(key, t, j);
      key = ModMul(key, w_inv, g.modulus);
    }
  }
  return out;
}

std::vector<uint32_t> OtReceiverDecrypt(const OtGroup& g, uint64_t s,
                                        std::span<const uint64_t> secrets,
                                        std::span<const uint8_t> choices,
                                        std::span<const uint64_t> ciphertexts,
                                        int L) {
  if (ciphertexts.size() != choices.size() * size_t(L)) {
    throw ProtocolError("malformed OT ciphertext batch");
  }
  std::vector<uint32_t> out(choices.size());
  for (size_t t = 0; t < choices.size(); ++t) {
    const uint64_t key = OtReceiverKey(g, s, secrets[t]);
    out[t] = uint32_t(ciphertexts[t * L + choices[t]]) ^ OtPad(key, t, choices[t]);
  }
  return out;
}

uint64_t OtExchangeSetup(Party& p, const OtGroup& g, OtSetup* sender_setup) {
  uint64_t s = 0;
  if (p.id() == 0) {
    *sender_setup = OtSetupRandom(g, p.rng());
    s = sender_setup->s;
    const uint64_t word[1] = {s};
    SendWords(p.channel(), word, kOtWordBytes);
  } else {
    s = RecvWords(p.channel(), 1, kOtWordBytes)[0];
    if (s <= 1 || s >= g.modulus) throw ProtocolError("invalid OT setup element");
  }
  p.channel().RoundBarrier();
  return s;
}

void OtSendBatch(Party& p, const OtGroup& g, const OtSetup& setup,
                 std::span<const uint32_t> messages, int L) {
  const size_t n = messages.size() / size_t(L);
  Bytes raw = p.channel().Recv();
  if (raw.size() != n * kOtWordBytes) {
    throw ProtocolError("malformed R list: expected " + std::to_string(n) +
                        " entries, got " + std::to_string(raw.size()) + " bytes");
  }
  ByteReader reader(raw);
  const auto r_list = reader.GetWords(n, kOtWordBytes);
  p.channel().RoundBarrier();
  const auto ct = OtSenderEncrypt(g, setup, r_list, messages, L);
  SendWords(p.channel(), ct, kOtWordBytes);
  p.channel().RoundBarrier();
}

std::vector<uint32_t> OtReceiveBatch(Party& p, const OtGroup& g, uint64_t s,
                                     std::span<const uint8_t> choices, int L) {
  std::vector<uint64_t> secrets;
  const auto r_list = OtReceiverChoose(g, s, choices, L, p.rng(), &secrets);
  SendWords(p.channel(), r_list, kOtWordBytes);
  p.channel().RoundBarrier();
  const auto ct = RecvWords(p.channel(), choices.size() * size_t(L), kOtWordBytes);
  p.channel().RoundBarrier();
  return OtReceiverDecrypt(g, s, secrets, choices, ct, L);
}

}  // namespace pinas
