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

#include "pinas/ring/fixed.h"

#include <cmath>
#include <sstream>

#include "pinas/common/errors.h"

namespace pinas {

void RingConfig::Validate() const {
  if (ring_bits < 2 || ring_bits > 64) {
    throw ConfigError("ring_bits must be in [2, 64], got " +
                      std::to_string(ring_bits));
  }
  if (frac_bits < 0 || frac_bits >= ring_bits) {
    throw ConfigError("frac_bits must be in [0, ring_bits), got " +
                      std::to_string(frac_bits));
  }
}

int64_t RingConfig::ToSigned(RingElem v) const {
  v = Reduce(v);
  if (ring_bits == 64) return static_cast<int64_t>(v);
  const uint64_t sign = uint64_t{1} << (ring_bits - 1);
  if (v & sign) return static_cast<int64_t>(v) - static_cast<int64_t>(sign << 1);
  return static_cast<int64_t>(v);
}

RingElem Encode(double value, const RingConfig& cfg) {
  const double limit = std::ldexp(1.0, cfg.ring_bits - cfg.frac_bits - 1);
  if (!std::isfinite(value) || std::fabs(value) >= limit) {
    std::ostringstream os;
    os << "value " << value << " out of fixed-point range (|v| < " << limit
       << ")";
    throw OverflowError(os.str());
  }
  // std::llround rounds halfway cases away from zero.
  const long long scaled = std::llround(std::ldexp(value, cfg.frac_bits));
  return cfg.FromSigned(scaled);
}

double Decode(RingElem elem, const RingConfig& cfg) {
  return std::ldexp(static_cast<double>(cfg.ToSigned(elem)), -cfg.frac_bits);
}

RingElem RingArithShift(RingElem a, int bits, const RingConfig& cfg) {
  return cfg.FromSigned(cfg.ToSigned(a) >> bits);
}

int64_t NumElements(const Shape& shape) {
  int64_t n = 1;
  for (int64_t e : shape) {
    if (e < 0) throw ShapeError("negative extent in shape " + ShapeString(shape));
    n *= e;
  }
  return n;
}

std::string ShapeString(const Shape& shape) {
  std::string s = "[";
  for (size_t i = 0; i < shape.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(shape[i]);
  }
  return s + "]";
}

FixedTensor::FixedTensor(Shape shape, RingConfig cfg)
    : shape_(std::move(shape)), cfg_(cfg) {
  cfg_.Validate();
  data_.assign(NumElements(shape_), 0);
}

FixedTensor::FixedTensor(Shape shape, std::vector<RingElem> data,
                         RingConfig cfg)
    : shape_(std::move(shape)), data_(std::move(data)), cfg_(cfg) {
  cfg_.Validate();
  if (static_cast<int64_t>(data_.size()) != NumElements(shape_)) {
    throw ShapeError("data length " + std::to_string(data_.size()) +
                     " does not match shape " + ShapeString(shape_));
  }
  for (auto& v : data_) v = cfg_.Reduce(v);
}

FixedTensor FixedTensor::FromReals(Shape shape, std::span<const double> values,
                                   RingConfig cfg) {
  std::vector<RingElem> data(values.size());
  for (size_t i = 0; i < values.size(); ++i) data[i] = Encode(values[i], cfg);
  return FixedTensor(std::move(shape), std::move(data), cfg);
}

FixedTensor FixedTensor::FromSigned(Shape shape,
                                    std::span<const int64_t> values,
                                    RingConfig cfg) {
  std::vector<RingElem> data(values.size());
  for (size_t i = 0; i < values.size(); ++i) data[i] = cfg.FromSigned(values[i]);
  return FixedTensor(std::move(shape), std::move(data), cfg);
}

std::vector<double> FixedTensor::ToReals() const {
  std::vector<double> out(data_.size());
  for (size_t i = 0; i < data_.size(); ++i) out[i] = Decode(data_[i], cfg_);
  return out;
}

std::vector<int64_t> FixedTensor::ToSigned() const {
  std::vector<int64_t> out(data_.size());
  for (size_t i = 0; i < data_.size(); ++i) out[i] = cfg_.ToSigned(data_[i]);
  return out;
}

FixedTensor FixedTensor::Reshaped(Shape shape) const {
  if (NumElements(shape) != size()) {
    throw ShapeError("cannot reshape " + ShapeString(shape_) + " to " +
                     ShapeString(shape));
  }
  return FixedTensor(std::move(shape), data_, cfg_);
}

void CheckSameLayout(const FixedTensor& a, const FixedTensor& b,
                     const char* what) {
  if (a.shape() != b.shape()) {
    throw ShapeError(std::string(what) + ": shape mismatch " +
                     ShapeString(a.shape()) + " vs " + ShapeString(b.shape()));
  }
  if (!(a.config() == b.config())) {
    throw ShapeError(std::string(what) + ": ring config mismatch");
  }
}

FixedTensor Add(const FixedTensor& a, const FixedTensor& b) {
  CheckSameLayout(a, b, "Add");
  FixedTensor out(a.shape(), a.config());
  const auto& cfg = a.config();
  for (int64_t i = 0; i < a.size(); ++i) out[i] = RingAdd(a[i], b[i], cfg);
  return out;
}

FixedTensor Sub(const FixedTensor& a, const FixedTensor& b) {
  CheckSameLayout(a, b, "Sub");
  FixedTensor out(a.shape(), a.config());
  const auto& cfg = a.config();
  for (int64_t i = 0; i < a.size(); ++i) out[i] = RingSub(a[i], b[i], cfg);
  return out;
}

FixedTensor Hadamard(const FixedTensor& a, const FixedTensor& b) {
  CheckSameLayout(a, b, "Hadamard");
  FixedTensor out(a.shape(), a.config());
  const auto& cfg = a.config();
  for (int64_t i = 0; i < a.size(); ++i) out[i] = RingMul(a[i], b[i], cfg);
  return out;
}

FixedTensor Neg(const FixedTensor& a) {
  FixedTensor out(a.shape(), a.config());
  for (int64_t i = 0; i < a.size(); ++i) out[i] = RingNeg(a[i], a.config());
  return out;
}

FixedTensor Scale(RingElem s, const FixedTensor& a) {
  FixedTensor out(a.shape(), a.config());
  for (int64_t i = 0; i < a.size(); ++i) out[i] = RingMul(s, a[i], a.config());
  return out;
}

FixedTensor MatMul(const FixedTensor& a, const FixedTensor& b) {
  if (a.shape().size() != 2 || b.shape().size() != 2 ||
      a.shape()[1] != b.shape()[0]) {
    throw ShapeError("MatMul: incompatible shapes " + ShapeString(a.shape()) +
                     " x " + ShapeString(b.shape()));
  }
  if (!(a.config() == b.config())) throw ShapeError("MatMul: config mismatch");
  const int64_t m = a.shape()[0], k = a.shape()[1], n = b.shape()[1];
  std::vector<RingElem> out(m * n, 0);
  const auto av = a.data();
  const auto bv = b.data();
  for (int64_t i = 0; i < m; ++i) {
    for (int64_t p = 0; p < k; ++p) {
      const RingElem x = av[i * k + p];
      if (x == 0) continue;
      const RingElem* brow = bv.data() + p * n;
      RingElem* orow = out.data() + i * n;
      for (int64_t j = 0; j < n; ++j) orow[j] += x * brow[j];
    }
  }
  return FixedTensor({m, n}, std::move(out), a.config());
}

}  // namespace pinas
