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

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "pinas/ring/fixed.h"

namespace pinas::ad {

// Graph node. Values and gradients are dense row-major doubles.
struct Node {
  std::vector<double> value;
  std::vector<double> grad;
  Shape shape;
  std::vector<std::shared_ptr<Node>> parents;
  // Adds this node's gradient into its parents' gradients.
  std::function<void(Node&)> backward;
  bool requires_grad = false;
  const char* op = "leaf";
};

class Var {
 public:
  Var() = default;
  explicit Var(std::shared_ptr<Node> n) : n_(std::move(n)) {}

  const std::vector<double>& value() const { return n_->value; }
  const std::vector<double>& grad() const { return n_->grad; }
  const Shape& shape() const { return n_->shape; }
  int64_t size() const { return int64_t(n_->value.size()); }
  double item() const;  // value of a one-element tensor
  bool requires_grad() const { return n_->requires_grad; }
  Node* node() const { return n_.get(); }
  const std::shared_ptr<Node>& ptr() const { return n_; }

 private:
  std::shared_ptr<Node> n_;
};

// Leaves.
Var Param(Shape shape, std::vector<double> values);
Var Constant(Shape shape, std::vector<double> values);
Var Scalar(double v, bool requires_grad = false);

// Elementwise (equal shapes).
Var Add(const Var& a, const Var& b);
Var Sub(const Var& a, const Var& b);
Var Mul(const Var& a, const Var& b);
Var Scale(const Var& a, double s);
// a * s where s is a one-element tensor.
Var ScaleBy(const Var& a, const Var& s);
Var Square(const Var& a);
Var Relu(const Var& a);
// y = k * w1 * x^2 + w2 * x + b with one-element w1, w2, b.
Var X2Act(const Var& x, const Var& w1, const Var& w2, const Var& b, double k);

Var Reshape(const Var& a, Shape shape);
Var MatMul(const Var& a, const Var& b);  // [m,k] x [k,n]
// x:[B,N], w:[O,N], b:[O] -> [B,O]
Var Linear(const Var& x, const Var& w, const Var& b);
// x:[B,C,H,W], w:[O,C,K,K], b:[O] -> [B,O,OH,OW]
Var Conv2d(const Var& x, const Var& w, const Var& b, int64_t stride, int64_t padding);
Var MaxPool2d(const Var& x, int64_t k, int64_t stride);
Var AvgPool2d(const Var& x, int64_t k, int64_t stride);

Var Softmax(const Var& a);  // over a 1-D tensor
// sum_k theta[k] * xs[k]; theta is 1-D with xs.size() entries.
Var WeightedSum(const std::vector<Var>& xs, const Var& theta);
// Inner product with a constant vector; returns a one-element tensor.
Var Dot(const Var& a, const std::vector<double>& c);
Var Sum(const Var& a);
Var Mean(const Var& a);
// Mean over the batch of -log softmax(logits[b])[labels[b]]; logits [B,K].
Var SoftmaxCrossEntropy(const Var& logits, const std::vector<int>& labels);

// Reverse pass from a one-element tensor: zeroes every gradient in the
// graph, seeds d(root)/d(root) = 1 and propagates. Throws NumericError when
// the root or any gradient is not finite.
void Backward(const Var& root);

}  // namespace pinas::ad
