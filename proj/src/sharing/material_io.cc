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

#include "pinas/ring/tensor_io.h"
#include "pinas/sharing/beaver.h"

namespace pinas {
namespace {

void PutShareWords(ByteWriter& w, const Share& s) {
  w.PutWords(s.tensor.data(), s.config().word_bytes());
}

Share GetShare(ByteReader& r, int party, const Shape& shape,
               const RingConfig& cfg) {
  auto words = r.GetWords(size_t(NumElements(shape)), cfg.word_bytes());
  return Share{party, FixedTensor(shape, std::move(words), cfg), 0};
}

}  // namespace

Bytes SerializeMaterial(const MaterialStore& store) {
  ByteWriter w;
  w.PutMagic("BVT1");
  w.PutU8(uint8_t(store.config().ring_bits));
  w.PutU8(uint8_t(store.config().frac_bits));
  w.PutU8(uint8_t(store.party()));
  w.PutU32(uint32_t(store.triples_left()));
  w.PutU32(uint32_t(store.pairs_left()));
  for (const auto& t : store.triples()) {
    w.PutU8(uint8_t(t.shape.kind));
    w.PutU32(uint32_t(t.shape.m));
    w.PutU32(uint32_t(t.shape.k));
    w.PutU32(uint32_t(t.shape.n));
    w.PutU64(t.id);
    PutShareWords(w, t.a);
    PutShareWords(w, t.b);
    PutShareWords(w, t.z);
  }
  for (const auto& p : store.pairs()) {
    w.PutU32(uint32_t(p.a.size()));
    w.PutU64(p.id);
    PutShareWords(w, p.a);
    PutShareWords(w, p.z);
  }
  return w.Take();
}

MaterialStore ParseMaterial(std::span<const uint8_t> data) {
  ByteReader r(data);
  r.ExpectMagic("BVT1");
  RingConfig cfg;
  cfg.ring_bits = r.GetU8();
  cfg.frac_bits = r.GetU8();
  try {
    cfg.Validate();
  } catch (const ConfigError& e) {
    throw FormatError(std::string("BVT1 header: ") + e.what());
  }
  const int party = r.GetU8();
  if (party > 1) throw FormatError("BVT1: bad party id");
  const uint32_t n_triples = r.GetU32();
  const uint32_t n_pairs = r.GetU32();
  MaterialStore store(party, cfg);
  for (uint32_t i = 0; i < n_triples; ++i) {
    TripleShape s;
    const uint8_t kind = r.GetU8();
    if (kind > 1) throw FormatError("BVT1: bad triple kind");
    s.kind = ProductKind(kind);
    s.m = r.GetU32();
    s.k = r.GetU32();
    s.n = r.GetU32();
    BeaverTriple t;
    t.id = r.GetU64();
    t.shape = s;
    t.a = GetShare(r, party, s.a_shape(), cfg);
    t.b = GetShare(r, party, s.b_shape(), cfg);
    t.z = GetShare(r, party, s.z_shape(), cfg);
    store.AddTriple(std::move(t));
  }
  for (uint32_t i = 0; i < n_pairs; ++i) {
    const int64_t size = r.GetU32();
    BeaverPair p;
    p.id = r.GetU64();
    p.a = GetShare(r, party, {size}, cfg);
    p.z = GetShare(r, party, {size}, cfg);
    store.AddPair(std::move(p));
  }
  if (r.remaining() != 0) throw FormatError("BVT1: trailing bytes");
  return store;
}

void SaveMaterial(const std::string& path, const MaterialStore& store) {
  WriteFileBytes(path, SerializeMaterial(store));
}

MaterialStore LoadMaterial(const std::string& path) {
  return ParseMaterial(ReadFileBytes(path));
}

}  // namespace pinas
