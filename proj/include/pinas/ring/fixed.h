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
#include <string>
#include <vector>

namespace pinas {

using RingElem = uint64_t;
using Shape = std::vector<int64_t>;

// Z_{2^k} with a two's-complement view and f fractional bits.
struct RingConfig {
  int ring_bits = 32;
  int frac_bits = 16;

  // Throws ConfigError unless 2 <= k <= 64 and 0 <= f < k.
  void Validate() const;

  RingElem mask() const {
    return ring_bits == 64 ? ~uint64_t{0} : (uint64_t{1} << ring_bits) - 1;
  }
  RingElem Reduce(uint64_t v) const { return v & mask(); }
  // Signed interpretation in [-2^{k-1}, 2^{k-1}).
  int64_t ToSigned(RingElem v) const;
  RingElem FromSigned(int64_t v) const { return Reduce(static_cast<uint64_t>(v)); }
  // Bytes used for one element on the wire and in files.
  int word_bytes() const { return (ring_bits + 7) / 8; }

  bool operator==(const RingConfig&) const = default;
};

// round(value * 2^f) mod 2^k, rounding half away from zero.
// Throws OverflowError when |value| >= 2^{k-f-1}.
RingElem Encode(double value, const RingConfig& cfg);
double Decode(RingElem elem, const RingConfig& cfg);

inline RingElem RingAdd(RingElem a, RingElem b, const RingConfig& cfg) {
  return cfg.Reduce(a + b);
}
inline RingElem RingSub(RingElem a, RingElem b, const RingConfig& cfg) {
  return cfg.Reduce(a - b);
}
inline RingElem RingMul(RingElem a, RingElem b, const RingConfig& cfg) {
  return cfg.Reduce(a * b);
}
inline RingElem RingNeg(RingElem a, const RingConfig& cfg) {
  return cfg.Reduce(uint64_t{0} - a);
}
// Arithmetic (sign-preserving) right shift in the signed view.
RingElem RingArithShift(RingElem a, int bits, const RingConfig& cfg);

int64_t NumElements(const Shape& shape);
std::string ShapeString(const Shape& shape);

// n-dimensional tensor of ring elements sharing one RingConfig.
class FixedTensor {
 public:
  FixedTensor() = default;
  FixedTensor(Shape shape, RingConfig cfg);
  FixedTensor(Shape shape, std::vector<RingElem> data, RingConfig cfg);

  static FixedTensor FromReals(Shape shape, std::span<const double> values,
                               RingConfig cfg);
  static FixedTensor FromSigned(Shape shape, std::span<const int64_t> values,
                                RingConfig cfg);

  const Shape& shape() const { return shape_; }
  const RingConfig& config() const { return cfg_; }
  int64_t size() const { return static_cast<int64_t>(data_.size()); }
  std::span<const RingElem> data() const { return data_; }
  std::span<RingElem> data() { return data_; }
  RingElem operator[](int64_t i) const { return data_[i]; }
  RingElem& operator[](int64_t i) { return data_[i]; }

  std::vector<double> ToReals() const;
  std::vector<int64_t> ToSigned() const;
  FixedTensor Reshaped(Shape shape) const;

  bool operator==(const FixedTensor&) const = default;

 private:
  Shape shape_;
  std::vector<RingElem> data_;
  RingConfig cfg_;
};

// Elementwise helpers; operands must share shape and config.
FixedTensor Add(const FixedTensor& a, const FixedTensor& b);
FixedTensor Sub(const FixedTensor& a, const FixedTensor& b);
FixedTensor Hadamard(const FixedTensor& a, const FixedTensor& b);
FixedTensor Neg(const FixedTensor& a);
FixedTensor Scale(RingElem s, const FixedTensor& a);
// [m,k] x [k,n] -> [m,n] in the ring.
FixedTensor MatMul(const FixedTensor& a, const FixedTensor& b);

void CheckSameLayout(const FixedTensor& a, const FixedTensor& b,
                     const char* what);

}  // namespace pinas
