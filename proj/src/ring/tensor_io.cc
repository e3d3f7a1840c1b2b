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

#include <fstream>
#include <iterator>

namespace pinas {

Bytes ReadFileBytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  return Bytes(std::istreambuf_iterator<char>(in), {});
}

void WriteFileBytes(const std::string& path, std::span<const uint8_t> data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path);
  out.write(reinterpret_cast<const char*>(data.data()),
            static_cast<std::streamsize>(data.size()));
  if (!out) throw IoError("short write to " + path);
}

Bytes SerializeTensor(const FixedTensor& t) {
  ByteWriter w;
  w.PutMagic("FXT1");
  w.PutU8(uint8_t(t.config().ring_bits));
  w.PutU8(uint8_t(t.config().frac_bits));
  w.PutU8(uint8_t(t.shape().size()));
  for (int64_t e : t.shape()) w.PutU32(uint32_t(e));
  w.PutWords(t.data(), t.config().word_bytes());
  return w.Take();
}

FixedTensor ParseTensor(std::span<const uint8_t> data) {
  ByteReader r(data);
  r.ExpectMagic("FXT1");
  RingConfig cfg;
  cfg.ring_bits = r.GetU8();
  cfg.frac_bits = r.GetU8();
  try {
    cfg.Validate();
  } catch (const ConfigError& e) {
    throw FormatError(std::string("FXT1 header: ") + e.what());
  }
  const int ndim = r.GetU8();
  Shape shape(ndim);
  for (auto& e : shape) e = r.GetU32();
  const int64_t n = NumElements(shape);
  auto words = r.GetWords(size_t(n), cfg.word_bytes());
  if (r.remaining() != 0) throw FormatError("FXT1: trailing bytes");
  return FixedTensor(std::move(shape), std::move(words), cfg);
}

void SaveTensor(const std::string& path, const FixedTensor& t) {
  WriteFileBytes(path, SerializeTensor(t));
}

FixedTensor LoadTensor(const std::string& path) {
  return ParseTensor(ReadFileBytes(path));
}

}  // namespace pinas
