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

#include "pinas/ops/inference.h"

#include <chrono>
#include <cstring>
#include <future>
#include <tuple>

#include "pinas/common/errors.h"
#include "pinas/ot/hash.h"

namespace pinas {
namespace {

Share EvalLayer(Party& p, const LayerSpec& l, const Share& x, const RunOptions& opt,
                size_t index) {
  const bool shared = opt.mode == WeightsMode::kShared;
  if (shared && (l.kind == LayerKind::kConv || l.kind == LayerKind::kFc) &&
      (opt.shared == nullptr || opt.shared->size() <= index)) {
    throw ConfigError("shared weights mode without parameter shares");
  }
  switch (l.kind) {
    case LayerKind::kConv:
      return shared ? Conv2pc(p, x, l, (*opt.shared)[index]) : Conv2pc(p, x, l);
    case LayerKind::kFc:
      return shared ? Fc2pc(p, x, l, (*opt.shared)[index]) : Fc2pc(p, x, l);
    case LayerKind::kRelu:
      return Relu2pc(p, x, opt.group);
    case LayerKind::kMaxPool:
      return MaxPool2pc(p, x, l, opt.group);
    case LayerKind::kAvgPool:
      return AvgPool2pc(x, l);
    case LayerKind::kX2Act:
      return X2Act2pc(p, x, l);
  }
  throw ShapeError("unknown layer kind");
}

}  // namespace

Share RunModel(Party& p, const ModelSpec& m, const Share& x, const RunOptions& opt,
               std::vector<LayerStats>* stats) {
  if (x.shape() != m.input_shape) {
    throw ShapeError("input share shape " + ShapeString(x.shape()) +
                     " does not match model " + ShapeString(m.input_shape));
  }
  if (!(x.config() == m.ring)) throw ConfigError("input ring differs from model ring");
  Share cur = x;
  for (size_t i = 0; i < m.layers.size(); ++i) {
    const Transcript& t = p.channel().transcript();
    const int r0 = t.rounds();
    const uint64_t s0 = t.payload_bytes(Direction::kSend);
    const uint64_t v0 = t.payload_bytes(Direction::kRecv);
    const auto start = std::chrono::steady_clock::now();
    cur = EvalLayer(p, m.layers[i], cur, opt, i);
    if (stats) {
      stats->push_back({m.layers[i].name, m.layers[i].kind, t.rounds() - r0,
                        t.payload_bytes(Direction::kSend) - s0,
                        t.payload_bytes(Direction::kRecv) - v0,
                        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                            .count()});
    }
  }
  return cur;
}

SessionResult SecureInference(Party& p, const ModelSpec& m, const FixedTensor* input,
                              const RunOptions& opt) {
  const RingConfig& cfg = m.ring;
  const int64_t n = NumElements(m.input_shape);
  Share x;
  if (p.id() == 0) {
    if (input == nullptr) throw ConfigError("party 0 needs the input tensor");
    if (input->shape() != m.input_shape || !(input->config() == cfg)) {
      throw ShapeError("input " + ShapeString(input->shape()) + " does not match model");
    }
    auto [x0, x1] = Shr(*input, p.rng());
    SendWords(p.channel(), x1.tensor.data(), cfg.word_bytes());
    x = std::move(x0);
  } else {
    auto words = RecvWords(p.channel(), size_t(n), cfg.word_bytes());
    x = Share{1, FixedTensor(m.input_shape, std::move(words), cfg)};
  }
  p.channel().RoundBarrier();

  SessionResult res;
  Share y = RunModel(p, m, x, opt, &res.layers);

  if (p.id() == 1) {
    SendWords(p.channel(), y.tensor.data(), cfg.word_bytes());
  } else {
    auto words = RecvWords(p.channel(), size_t(y.size()), cfg.word_bytes());
    res.logits = Add(y.tensor, FixedTensor(y.shape(), std::move(words), cfg));
  }
  p.channel().RoundBarrier();
  return res;
}

InProcResult RunInProc(const ModelSpec& m, const FixedTensor& input, uint64_t dealer_seed,
                       uint64_t protocol_seed, RunOptions opt) {
  m.Validate();
  Prg dealer(dealer_seed);
  auto [m0, m1] = DealerIssue(PlanMaterial(m, opt.mode), m.ring, dealer);
  std::vector<SharedParams> w0, w1;
  if (opt.mode == WeightsMode::kShared) std::tie(w0, w1) = ShareWeights(m, dealer);

  auto [c0, c1] = MakeInProcPair();
  RunOptions opt1 = opt;
  opt.shared = &w0;
  opt1.shared = &w1;
  auto fut = std::async(std::launch::async, [&, ch = c1.get()] {
    try {
      Party p(*ch, protocol_seed, &m1);
      return SecureInference(p, m, nullptr, opt1);
    } catch (...) {
      ch->Close();
      throw;
    }
  });
  SessionResult r0;
  try {
    Party p(*c0, protocol_seed, &m0);
    r0 = SecureInference(p, m, &input, opt);
  } catch (...) {
    c0->Close();
    throw;
  }
  fut.get();
  return {std::move(r0.logits), std::move(r0.layers), c0->transcript()};
}

uint64_t ModelDigest(const ModelSpec& m) {
  uint64_t h = Mix64(uint64_t(m.ring.ring_bits) << 8 | uint64_t(m.ring.frac_bits));
  for (int64_t e : m.input_shape) h = Mix64(h ^ uint64_t(e));
  for (const auto& l : m.layers) {
    h = Mix64(h ^ uint64_t(l.kind));
    for (int64_t v : {l.in_channels, l.out_channels, l.kernel_h, l.kernel_w, l.stride_h,
                      l.stride_w, l.padding}) {
      h = Mix64(h ^ uint64_t(v));
    }
    for (RingElem v : l.weight.data()) h = Mix64(h ^ v);
    for (RingElem v : l.bias.data()) h = Mix64(h ^ v);
    for (double d : {l.x2act.w1, l.x2act.w2, l.x2act.b, l.x2act.c, l.x2act.n_x}) {
      uint64_t bits;
      std::memcpy(&bits, &d, sizeof bits);
      h = Mix64(h ^ bits);
    }
  }
  return h;
}

void Handshake(Channel& ch, const SessionInfo& mine) {
  ByteWriter w;
  w.PutMagic("PIHS");
  w.PutU8(uint8_t(mine.ring.ring_bits));
  w.PutU8(uint8_t(mine.ring.frac_bits));
  w.PutU8(mine.weights_mode);
  w.PutU64(mine.model_digest);
  ch.Send(w.bytes());
  Bytes peer = ch.Recv();
  ch.RoundBarrier();
  ByteReader r(peer);
  r.ExpectMagic("PIHS");
  const int k = r.GetU8();
  const int f = r.GetU8();
  const int mode = r.GetU8();
  const uint64_t digest = r.GetU64();
  if (k != mine.ring.ring_bits || f != mine.ring.frac_bits) {
    throw ConfigError("ring mismatch at handshake: local k=" +
                      std::to_string(mine.ring.ring_bits) + " f=" +
                      std::to_string(mine.ring.frac_bits) + ", peer k=" + std::to_string(k) +
                      " f=" + std::to_string(f));
  }
  if (mode != mine.weights_mode) throw ConfigError("weights mode mismatch at handshake");
  if (digest != mine.model_digest) throw ConfigError("model mismatch at handshake");
  ch.ResetAccounting();
}

int ArgMax(const FixedTensor& logits) {
  int best = 0;
  for (int64_t i = 1; i < logits.size(); ++i) {
    if (logits.config().ToSigned(logits[i]) > logits.config().ToSigned(logits[best])) {
      best = int(i);
    }
  }
  return best;
}

}  // namespace pinas
