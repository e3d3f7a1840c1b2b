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

#include "pinas/sharing/beaver.h"

#include "pinas/common/errors.h"

namespace pinas {

Shape TripleShape::a_shape() const {
  return kind == ProductKind::kMatMul ? Shape{m, k} : Shape{m};
}
Shape TripleShape::b_shape() const {
  return kind == ProductKind::kMatMul ? Shape{k, n} : Shape{m};
}
Shape TripleShape::z_shape() const {
  return kind == ProductKind::kMatMul ? Shape{m, n} : Shape{m};
}

std::string TripleShape::ToString() const {
  if (kind == ProductKind::kMatMul) {
    return "mm:" + std::to_string(m) + "x" + std::to_string(k) + "x" +
           std::to_string(n);
  }
  return "ew:" + std::to_string(m);
}

BeaverTriple MaterialStore::NextTriple(const TripleShape& shape) {
  if (triples_.empty()) {
    throw ExhaustedError("no Beaver triple left for " + shape.ToString());
  }
  if (!(triples_.front().shape == shape)) {
    throw ShapeError("next triple is " + triples_.front().shape.ToString() +
                     ", protocol needs " + shape.ToString());
  }
  BeaverTriple t = std::move(triples_.front());
  triples_.pop_front();
  return t;
}

BeaverPair MaterialStore::NextPair(int64_t size) {
  if (pairs_.empty()) {
    throw ExhaustedError("no Beaver pair left for size " + std::to_string(size));
  }
  if (pairs_.front().a.size() != size) {
    throw ShapeError("next pair has " + std::to_string(pairs_.front().a.size()) +
                     " elements, protocol needs " + std::to_string(size));
  }
  BeaverPair p = std::move(pairs_.front());
  pairs_.pop_front();
  return p;
}

namespace {

FixedTensor RandomTensor(const Shape& shape, const RingConfig& cfg, Prg& rng) {
  FixedTensor t(shape, cfg);
  for (auto& v : t.data()) v = RandomRing(rng, cfg);
  return t;
}

FixedTensor Product(const TripleShape& s, const FixedTensor& a,
                    const FixedTensor& b) {
  return s.kind == ProductKind::kMatMul ? MatMul(a, b) : Hadamard(a, b);
}

}  // namespace

std::pair<MaterialStore, MaterialStore> DealerIssue(
    std::span<const MaterialRequest> requests, const RingConfig& cfg, Prg& rng) {
  cfg.Validate();
  MaterialStore s0(0, cfg), s1(1, cfg);
  uint64_t next_id = 1;
  for (const auto& req : requests) {
    const TripleShape& shape = req.shape;
    if (shape.m <= 0 || shape.k <= 0 || shape.n <= 0) {
      throw ShapeError("dealer: non-positive dimension in " + shape.ToString());
    }
    const uint64_t id = next_id++;
    if (req.kind == MaterialRequest::Kind::kTriple) {
      FixedTensor a = RandomTensor(shape.a_shape(), cfg, rng);
      FixedTensor b = RandomTensor(shape.b_shape(), cfg, rng);
      FixedTensor z = Product(shape, a, b);
      auto [a0, a1] = Shr(a, rng);
      auto [b0, b1] = Shr(b, rng);
      auto [z0, z1] = Shr(z, rng);
      if (!(Product(shape, Rec(a0, a1), Rec(b0, b1)) == Rec(z0, z1))) {
        throw ProtocolError("dealer self-check failed");
      }
      s0.AddTriple({id, shape, a0, b0, z0});
      s1.AddTriple({id, shape, a1, b1, z1});
    } else {
      FixedTensor a = RandomTensor({shape.m}, cfg, rng);
      FixedTensor z = Hadamard(a, a);
      auto [a0, a1] = Shr(a, rng);
      auto [z0, z1] = Shr(z, rng);
      s0.AddPair({id, a0, z0});
      s1.AddPair({id, a1, z1});
    }
  }
  return {std::move(s0), std::move(s1)};
}

std::vector<MaterialRequest> Repeat(std::span<const MaterialRequest> requests,
                                    int count) {
  std::vector<MaterialRequest> out;
  out.reserve(requests.size() * size_t(std::max(count, 0)));
  for (const auto& r : requests) {
    for (int i = 0; i < count; ++i) out.push_back(r);
  }
  return out;
}

}  // namespace pinas
