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

#include "pinas/sharing/protocols.h"

#include <algorithm>

namespace pinas {
namespace {

void Consume(const std::shared_ptr<bool>& used, uint64_t id, const char* what) {
  if (*used) {
    throw ReuseError(std::string(what) + " " + std::to_string(id) +
                     " was already used");
  }
  *used = true;
}

TripleShape ShapeFor(const Share& x, const Share& y, ProductKind kind) {
  if (kind == ProductKind::kMatMul) {
    if (x.shape().size() != 2 || y.shape().size() != 2 ||
        x.shape()[1] != y.shape()[0]) {
      throw ShapeError("BeaverMul: incompatible matmul operands " +
                       ShapeString(x.shape()) + " x " + ShapeString(y.shape()));
    }
    return TripleShape::MatMul(x.shape()[0], x.shape()[1], y.shape()[1]);
  }
  CheckSameLayout(x.tensor, y.tensor, "BeaverMul");
  return TripleShape::Hadamard(x.size());
}

// Sends our halves of the masked operands and returns the opened values.
std::vector<FixedTensor> OpenMasked(Party& p,
                                    std::initializer_list<const FixedTensor*> mine) {
  const RingConfig& cfg = (*mine.begin())->config();
  std::vector<uint64_t> words;
  for (const FixedTensor* t : mine) {
    words.insert(words.end(), t->data().begin(), t->data().end());
  }
  SendWords(p.channel(), words, cfg.word_bytes());
  auto peer = RecvWords(p.channel(), words.size(), cfg.word_bytes());
  p.channel().RoundBarrier();

  std::vector<FixedTensor> out;
  size_t off = 0;
  for (const FixedTensor* t : mine) {
    FixedTensor opened(t->shape(), cfg);
    for (int64_t i = 0; i < t->size(); ++i) {
      opened[i] = cfg.Reduce((*t)[i] + peer[off + i]);
    }
    off += size_t(t->size());
    out.push_back(std::move(opened));
  }
  return out;
}

}  // namespace

Share BeaverMul(Party& p, const Share& x, const Share& y, ProductKind kind,
                const BeaverTriple& t) {
  const TripleShape shape = ShapeFor(x, y, kind);
  if (!(t.shape == shape)) {
    throw ShapeError("BeaverMul: triple " + t.shape.ToString() +
                     " does not match operands " + shape.ToString());
  }
  if (x.party != p.id() || y.party != p.id()) {
    throw ShapeError("BeaverMul: operand share belongs to the other party");
  }
  Consume(t.used, t.id, "triple");
  const RingConfig& cfg = x.config();

  if (kind == ProductKind::kMatMul) {
    FixedTensor e_mine = Sub(x.tensor, t.a.tensor);
    FixedTensor f_mine = Sub(y.tensor, t.b.tensor);
    auto opened = OpenMasked(p, {&e_mine, &f_mine});
    const FixedTensor& e = opened[0];
    const FixedTensor& f = opened[1];
    FixedTensor r = Add(Add(MatMul(x.tensor, f), MatMul(e, y.tensor)), t.z.tensor);
    if (p.id() == 1) r = Sub(r, MatMul(e, f));
    return Share{p.id(), std::move(r), x.session};
  }

  const Shape flat{x.size()};
  FixedTensor e_mine = Sub(x.tensor.Reshaped(flat), t.a.tensor);
  FixedTensor f_mine = Sub(y.tensor.Reshaped(flat), t.b.tensor);
  auto opened = OpenMasked(p, {&e_mine, &f_mine});
  const auto e = opened[0].data();
  const auto f = opened[1].data();
  const auto xs = x.tensor.data();
  const auto ys = y.tensor.data();
  const auto zs = t.z.tensor.data();
  const uint64_t minus_i = p.id() == 1 ? ~uint64_t{0} : 0;  // -i mod 2^64
  FixedTensor r(x.shape(), cfg);
  for (int64_t i = 0; i < x.size(); ++i) {
    r[i] = cfg.Reduce(minus_i * e[i] * f[i] + xs[i] * f[i] + e[i] * ys[i] + zs[i]);
  }
  return Share{p.id(), std::move(r), x.session};
}

Share BeaverMul(Party& p, const Share& x, const Share& y, ProductKind kind) {
  const TripleShape shape = ShapeFor(x, y, kind);
  BeaverTriple t = p.material().NextTriple(shape);
  return BeaverMul(p, x, y, kind, t);
}

Share BeaverSquare(Party& p, const Share& x, const BeaverPair& pair) {
  if (pair.a.size() != x.size()) {
    throw ShapeError("BeaverSquare: pair has " + std::to_string(pair.a.size()) +
                     " elements, operand has " + std::to_string(x.size()));
  }
  if (x.party != p.id()) {
    throw ShapeError("BeaverSquare: operand share belongs to the other party");
  }
  Consume(pair.used, pair.id, "pair");
  const RingConfig& cfg = x.config();
  FixedTensor e_mine = Sub(x.tensor.Reshaped({x.size()}), pair.a.tensor);
  auto opened = OpenMasked(p, {&e_mine});
  const auto e = opened[0].data();
  const auto as = pair.a.tensor.data();
  const auto zs = pair.z.tensor.data();
  FixedTensor r(x.shape(), cfg);
  for (int64_t i = 0; i < x.size(); ++i) {
    uint64_t v = zs[i] + 2 * e[i] * as[i];
    if (p.id() == 0) v += e[i] * e[i];
    r[i] = cfg.Reduce(v);
  }
  return Share{p.id(), std::move(r), x.session};
}

Share BeaverSquare(Party& p, const Share& x) {
  BeaverPair pair = p.material().NextPair(x.size());
  return BeaverSquare(p, x, pair);
}

Share Truncate(const Share& x, int bits) {
  const RingConfig& cfg = x.config();
  Share out = x;
  for (auto& v : out.tensor.data()) {
    if (x.party == 0) {
      v = RingArithShift(v, bits, cfg);
    } else {
      v = RingNeg(RingArithShift(RingNeg(v, cfg), bits, cfg), cfg);
    }
  }
  return out;
}

FixedTensor Open(Party& p, const Share& x) {
  auto opened = OpenMasked(p, {&x.tensor});
  return std::move(opened[0]);
}

}  // namespace pinas
