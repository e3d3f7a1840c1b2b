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

#include "pinas/nas/tensor_set.h"

#include <cmath>

#include "pinas/common/errors.h"

namespace pinas {

void TensorSet::Append(std::string name, Shape shape, std::vector<double> v) {
  if (NumElements(shape) != int64_t(v.size())) {
    throw ShapeError("tensor " + name + ": " + std::to_string(v.size()) + " values for shape " +
                     ShapeString(shape));
  }
  names.push_back(std::move(name));
  shapes.push_back(std::move(shape));
  values.push_back(std::move(v));
}

int64_t TensorSet::NumScalars() const {
  int64_t n = 0;
  for (const auto& v : values) n += int64_t(v.size());
  return n;
}

size_t TensorSet::Find(const std::string& name) const {
  for (size_t i = 0; i < names.size(); ++i) {
    if (names[i] == name) return i;
  }
  throw ConfigError("no tensor named " + name);
}

double TensorSet::Norm() const {
  double s = 0;
  for (const auto& v : values) {
    for (double e : v) s += e * e;
  }
  return std::sqrt(s);
}

void TensorSet::CheckLayout(const TensorSet& other, const char* what) const {
  if (other.count() != count()) throw ShapeError(std::string(what) + ": tensor count differs");
  for (size_t i = 0; i < count(); ++i) {
    if (other.values[i].size() != values[i].size()) {
      throw ShapeError(std::string(what) + ": tensor " + names[i] + " size differs");
    }
  }
}

TensorSet TensorSet::Axpy(double a, const TensorSet& x) const {
  CheckLayout(x, "Axpy");
  TensorSet out = *this;
  for (size_t i = 0; i < count(); ++i) {
    for (size_t j = 0; j < values[i].size(); ++j) out.values[i][j] += a * x.values[i][j];
  }
  return out;
}

TensorSet TensorSet::ZerosLike() const {
  TensorSet out = *this;
  for (auto& v : out.values) std::fill(v.begin(), v.end(), 0.0);
  return out;
}

std::vector<ad::Var> TensorSet::Leaves() const {
  std::vector<ad::Var> out;
  for (size_t i = 0; i < count(); ++i) out.push_back(ad::Param(shapes[i], values[i]));
  return out;
}

TensorSet TensorSet::GradientsOf(const std::vector<ad::Var>& leaves) const {
  if (leaves.size() != count()) throw ShapeError("GradientsOf: leaf count differs");
  TensorSet out = ZerosLike();
  for (size_t i = 0; i < count(); ++i) {
    // Leaves that the loss does not reach keep a zero gradient.
    if (leaves[i].grad().size() == values[i].size()) out.values[i] = leaves[i].grad();
  }
  return out;
}

}  // namespace pinas
