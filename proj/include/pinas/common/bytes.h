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
#include <cstring>
#include <span>
#include <string>
#include <vector>

#include "pinas/common/errors.h"

namespace pinas {

using Bytes = std::vector<uint8_t>;

// Little-endian append-only writer.
class ByteWriter {
 public:
  void PutU8(uint8_t v) { buf_.push_back(v); }
  void PutUint(uint64_t v, int width) {
    for (int i = 0; i < width; ++i) buf_.push_back(uint8_t(v >> (8 * i)));
  }
  void PutU32(uint32_t v) { PutUint(v, 4); }
  void PutU64(uint64_t v) { PutUint(v, 8); }
  void PutWords(std::span<const uint64_t> words, int width) {
    buf_.reserve(buf_.size() + words.size() * width);
    for (uint64_t w : words) PutUint(w, width);
  }
  void PutRaw(std::span<const uint8_t> raw) {
    buf_.insert(buf_.end(), raw.begin(), raw.end());
  }
  void PutMagic(const char (&magic)[5]) {
    for (int i = 0; i < 4; ++i) buf_.push_back(uint8_t(magic[i]));
  }

  const Bytes& bytes() const { return buf_; }
  Bytes Take() { return std::move(buf_); }

 private:
  Bytes buf_;
};

class ByteReader {
 public:
  explicit ByteReader(std::span<const uint8_t> data) : data_(data) {}

  uint8_t GetU8() { return uint8_t(GetUint(1)); }
  uint32_t GetU32() { return uint32_t(GetUint(4)); }
  uint64_t GetU64() { return GetUint(8); }
  uint64_t GetUint(int width) {
    Need(width);
    uint64_t v = 0;
    for (int i = 0; i < width; ++i) v |= uint64_t(data_[pos_ + i]) << (8 * i);
    pos_ += width;
    return v;
  }
  std::vector<uint64_t> GetWords(size_t count, int width) {
    Need(count * width);
    std::vector<uint64_t> out(count);
    for (auto& w : out) w = GetUint(width);
    return out;
  }
  void ExpectMagic(const char (&magic)[5]) {
    Need(4);
    if (std::memcmp(data_.data() + pos_, magic, 4) != 0) {
      throw FormatError(std::string("bad magic, expected ") + magic);
    }
    pos_ += 4;
  }
  size_t remaining() const { return data_.size() - pos_; }

 private:
  void Need(size_t n) const {
    if (pos_ + n > data_.size()) throw FormatError("truncated input");
  }

  std::span<const uint8_t> data_;
  size_t pos_ = 0;
};

Bytes ReadFileBytes(const std::string& path);
void WriteFileBytes(const std::string& path, std::span<const uint8_t> data);

}  // namespace pinas
