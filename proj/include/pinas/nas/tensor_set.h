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

#include <string>
#include <vector>

#include "pinas/nas/autodiff.h"

namespace pinas {

// Named list of real tensors: the weights w or the architecture logits
// alpha. Arithmetic helpers require identical layouts.
struct TensorSet {
  std::vector<std::string> names;
  std::vector<Shape> shapes;
  std::vector<std::vector<double>> values;

  void Append(std::string name, Shape shape, std::vector<double> v);
  size_t count() const { return values.size(); }
  int64_t NumScalars() const;
  // Index of `name`; throws ConfigError when absent.
  size_t Find(const std::string& name) const;
  const std::vector<double>& at(const std::string& name) const { return values[Find(name)]; }

  double Norm() const;
  // this + a * x
  TensorSet Axpy(double a, const TensorSet& x) const;
  TensorSet ZerosLike() const;
  void CheckLayout(const TensorSet& other, const char* what) const;

  // Fresh trainable leaves holding a copy of every tensor.
  std::vector<ad::Var> Leaves() const;
  // Gradients of leaves made by Leaves(), laid out like this set.
  TensorSet GradientsOf(const std::vector<ad::Var>& leaves) const;
};

}  // namespace pinas
