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

#include "pinas/ot/compare.h"

#include "pinas/common/errors.h"
#include "pinas/ot/hash.h"

namespace pinas {
namespace {

constexpr int kLabelBits = 16;
constexpr uint32_t kLabelMask = 0xFFFF;

uint32_t RowPad(uint32_t label, uint64_t elem, int stage) {
  return uint32_t(Mix64(Mix64(uint64_t(label) | (uint64_t(stage) << 16)) ^ elem)) &
         kLabelMask;
}

uint64_t OutputHash(uint32_t label, uint64_t elem, const RingConfig& cfg) {
  return cfg.Reduce(Mix64(Mix64(uint64_t(label) ^ 0x6472656c75000000ULL) + elem));
}

// Comparator state after seeing chunk a_u against receiver chunk j.
int Step(int state, uint32_t a_u, uint32_t j) {
  if (a_u > j) return 1;
  if (a_u < j) return 0;
  return state;
}

uint32_t FreshLabel(Prg& rng) { return uint32_t(rng()) & kLabelMask; }

}  // namespace

ChunkDecomposition ChunkDecomposition::ForRing(int ring_bits) {
  ChunkDecomposition d;
  d.parts = (ring_bits + d.chunk_bits - 1) / d.chunk_bits;
  return d;
}

CmpShare Drelu(Party& p, const Share& x, const OtGroup& group) {
  if (x.party != p.id()) {
    throw ShapeError("Drelu: operand share belongs to the other party");
  }
  const RingConfig& cfg = x.config();
  const int k = cfg.ring_bits;
  const ChunkDecomposition cd = ChunkDecomposition::ForRing(k);
  const int U = cd.parts;
  const int L = cd.index_list_len;
  const uint64_t low_mask = (uint64_t{1} << (k - 1)) - 1;
  // Bit of the last chunk that carries the sign bit.
  const int top_bit = (k - 1) - cd.chunk_bits * (U - 1);
  const uint32_t top_flag = 1u << top_bit;
  const int64_t n = x.size();
  const auto xs = x.tensor.data();

  OtSetup setup;
  const uint64_t s = OtExchangeSetup(p, group, p.id() == 0 ? &setup : nullptr);

  FixedTensor out(x.shape(), cfg);
  if (p.id() == 0) {
    Prg& rng = p.rng();
    std::vector<uint32_t> messages(size_t(n) * U * L);
    std::vector<uint64_t> convert(static_cast<size_t>(n));
    std::vector<uint32_t> label0(U + 1), label1(U + 1);
    for (int64_t e = 0; e < n; ++e) {
      const uint64_t a = xs[e] & low_mask;
      const uint32_t flip = uint32_t((xs[e] >> (k - 1)) & 1) ^ 1u;
      // label[s][state] has permute bit state ^ pi_s; stage 0 is public.
      label0[0] = 0;
      label1[0] = 1;
      for (int st = 1; st <= U; ++st) {
        const uint32_t pi = uint32_t(rng() & 1);
        label0[st] = (FreshLabel(rng) & ~1u) | pi;
        label1[st] = (FreshLabel(rng) & ~1u) | (pi ^ 1u);
      }
      for (int u = 0; u < U; ++u) {
        const uint32_t a_u = uint32_t(a >> (cd.chunk_bits * u)) & 3u;
        const uint32_t pi_u = label0[u] & 1u;
        for (int j = 0; j < L; ++j) {
          uint32_t word = 0;
          for (uint32_t perm = 0; perm < 2; ++perm) {
            const int st = int(perm ^ pi_u);
            int next;
            if (u == U - 1) {
              const uint32_t sign1 = (uint32_t(j) & top_flag) ? 1u : 0u;
              next = Step(st, a_u, uint32_t(j) & ~top_flag) ^ int(sign1 ^ flip);
            } else {
              next = Step(st, a_u, uint32_t(j));
            }
            const uint32_t prev = st ? label1[u] : label0[u];
            const uint32_t target = next ? label1[u + 1] : label0[u + 1];
            word |= ((RowPad(prev, uint64_t(e), u) ^ target) & kLabelMask)
                    << (kLabelBits * perm);
          }
          messages[(size_t(e) * U + u) * L + j] = word;
        }
      }
      // Final label with permute bit p encodes output bit p ^ pi.
      const uint64_t pi = label0[U] & 1u;
      const uint32_t with_p0 = pi ? label1[U] : label0[U];
      const uint32_t with_p1 = pi ? label0[U] : label1[U];
      const uint64_t h0 = OutputHash(with_p0, uint64_t(e), cfg);
      const uint64_t h1 = OutputHash(with_p1, uint64_t(e), cfg);
      out[e] = cfg.Reduce(pi - h0);
      convert[e] = cfg.Reduce(h1 - h0 + 2 * pi - 1);
    }
    OtSendBatch(p, group, setup, messages, L);
    SendWords(p.channel(), convert, cfg.word_bytes());
    p.channel().RoundBarrier();
  } else {
    std::vector<uint8_t> choices(size_t(n) * U);
    for (int64_t e = 0; e < n; ++e) {
      const uint64_t b =
          (low_mask - (xs[e] & low_mask)) | (xs[e] & (uint64_t{1} << (k - 1)));
      for (int u = 0; u < U; ++u) {
        choices[size_t(e) * U + u] = uint8_t((b >> (cd.chunk_bits * u)) & 3u);
      }
    }
    const auto rows = OtReceiveBatch(p, group, s, choices, L);
    const auto convert = RecvWords(p.channel(), size_t(n), cfg.word_bytes());
    p.channel().RoundBarrier();
    for (int64_t e = 0; e < n; ++e) {
      uint32_t label = 0;
      for (int u = 0; u < U; ++u) {
        const uint32_t perm = label & 1u;
        const uint32_t row = (rows[size_t(e) * U + u] >> (kLabelBits * perm)) & kLabelMask;
        label = row ^ RowPad(label, uint64_t(e), u);
      }
      const uint64_t perm = label & 1u;
      out[e] = cfg.Reduce(OutputHash(label, uint64_t(e), cfg) - perm * convert[e]);
    }
  }
  return Share{p.id(), std::move(out), x.session};
}

CmpShare SecureCmp(Party& p, const Share& x, const Share& y, const OtGroup& group) {
  CheckSameLayout(x.tensor, y.tensor, "SecureCmp");
  CmpShare d = Drelu(p, ShareSub(y, x), group);
  return AddPublicScalar(ShareNeg(d), 1);
}

}  // namespace pinas
