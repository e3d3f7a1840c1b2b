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

#include <deque>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pinas/common/bytes.h"
#include "pinas/sharing/share.h"

namespace pinas {

enum class ProductKind : uint8_t { kMatMul = 0, kHadamard = 1 };

// Dimensions of one multiplication. MatMul: [m,k] x [k,n]. Hadamard: m
// elements (k = n = 1).
struct TripleShape {
  ProductKind kind = ProductKind::kHadamard;
  int64_t m = 0;
  int64_t k = 1;
  int64_t n = 1;

  static TripleShape MatMul(int64_t m, int64_t k, int64_t n) {
    return {ProductKind::kMatMul, m, k, n};
  }
  static TripleShape Hadamard(int64_t size) {
    return {ProductKind::kHadamard, size, 1, 1};
  }
  Shape a_shape() const;
  Shape b_shape() const;
  Shape z_shape() const;
  std::string ToString() const;
  bool operator==(const TripleShape&) const = default;
};

// One party's half of a dealer triple with Z = A (x) B. Copies share the
// single-use flag, so consuming any copy consumes them all.
struct BeaverTriple {
  uint64_t id = 0;
  TripleShape shape;
  Share a, b, z;
  std::shared_ptr<bool> used = std::make_shared<bool>(false);
};

// One party's half of a dealer pair with Z = A . A elementwise.
struct BeaverPair {
  uint64_t id = 0;
  Share a, z;
  std::shared_ptr<bool> used = std::make_shared<bool>(false);
};

struct MaterialRequest {
  enum class Kind : uint8_t { kTriple = 0, kPair = 1 };
  Kind kind = Kind::kTriple;
  TripleShape shape;  // pairs use shape.m as the element count

  static MaterialRequest Triple(TripleShape s) { return {Kind::kTriple, s}; }
  static MaterialRequest Pair(int64_t size) {
    return {Kind::kPair, TripleShape::Hadamard(size)};
  }
  bool operator==(const MaterialRequest&) const = default;
};

// FIFO supply of one party's correlated randomness. Protocols pop items in
// the order the dealer issued them; both parties must consume in lockstep.
class MaterialStore {
 public:
  MaterialStore() = default;
  MaterialStore(int party, RingConfig cfg) : party_(party), cfg_(cfg) {}

  int party() const { return party_; }
  const RingConfig& config() const { return cfg_; }

  void AddTriple(BeaverTriple t) { triples_.push_back(std::move(t)); }
  void AddPair(BeaverPair p) { pairs_.push_back(std::move(p)); }

  // Throws ExhaustedError when empty and ShapeError when the next item
  // does not have the requested shape.
  BeaverTriple NextTriple(const TripleShape& shape);
  BeaverPair NextPair(int64_t size);

  size_t triples_left() const { return triples_.size(); }
  size_t pairs_left() const { return pairs_.size(); }
  const std::deque<BeaverTriple>& triples() const { return triples_; }
  const std::deque<BeaverPair>& pairs() const { return pairs_; }

 private:
  int party_ = 0;
  RingConfig cfg_;
  std::deque<BeaverTriple> triples_;
  std::deque<BeaverPair> pairs_;
};

// Trusted dealer: issues every request once, for both parties. Each issued
// triple satisfies rec(Z) = rec(A) (x) rec(B) exactly; this is re-checked
// before returning.
std::pair<MaterialStore, MaterialStore> DealerIssue(
    std::span<const MaterialRequest> requests, const RingConfig& cfg, Prg& rng);

// Convenience: `count` copies of each request.
std::vector<MaterialRequest> Repeat(std::span<const MaterialRequest> requests,
                                    int count);

// BVT1 layout, little-endian:
//   "BVT1" | u8 ring_bits | u8 frac_bits | u8 party | u32 n_triples |
//   u32 n_pairs | triples | pairs
// triple: u8 kind | u32 m | u32 k | u32 n | u64 id | A | B | Z words
// pair:   u32 size | u64 id | A | Z words
// Words are ceil(ring_bits/8) bytes.
Bytes SerializeMaterial(const MaterialStore& store);
MaterialStore ParseMaterial(std::span<const uint8_t> data);
void SaveMaterial(const std::string& path, const MaterialStore& store);
MaterialStore LoadMaterial(const std::string& path);

}  // namespace pinas
