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

#include "pinas/nas/autodiff.h"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "pinas/common/errors.h"

namespace pinas::ad {
namespace {

using NodePtr = std::shared_ptr<Node>;

Var Make(Shape shape, std::vector<double> value, std::vector<NodePtr> parents, const char* op,
         std::function<void(Node&)> backward) {
  auto n = std::make_shared<Node>();
  n->shape = std::move(shape);
  n->value = std::move(value);
  n->requires_grad = false;
  for (const auto& p : parents) n->requires_grad = n->requires_grad || p->requires_grad;
  n->parents = std::move(parents);
  n->op = op;
  if (n->requires_grad) n->backward = std::move(backward);
  return Var(std::move(n));
}

void SameShape(const Var& a, const Var& b, const char* op) {
  if (a.shape() != b.shape()) {
    throw ShapeError(std::string(op) + ": shape mismatch " + ShapeString(a.shape()) + " vs " +
                     ShapeString(b.shape()));
  }
}

void CheckRank(const Var& a, size_t rank, const char* op) {
  if (a.shape().size() != rank) {
    throw ShapeError(std::string(op) + ": expected rank " + std::to_string(rank) + ", got " +
                     ShapeString(a.shape()));
  }
}

void CheckScalar(const Var& a, const char* op) {
  if (a.size() != 1) throw ShapeError(std::string(op) + ": expected a one-element tensor");
}

// Gradient slot of a parent, allocated lazily.
std::vector<double>& G(Node& n) {
  if (n.grad.size() != n.value.size()) n.grad.assign(n.value.size(), 0.0);
  return n.grad;
}

template <class F>
Var Unary(const Var& a, const char* op, F f, std::function<double(double, double)> df) {
  std::vector<double> v(a.value().size());
  for (size_t i = 0; i < v.size(); ++i) v[i] = f(a.value()[i]);
  return Make(a.shape(), std::move(v), {a.ptr()}, op, [df](Node& self) {
    Node& p = *self.parents[0];
    if (!p.requires_grad) return;
    auto& g = G(p);
    for (size_t i = 0; i < g.size(); ++i) g[i] += self.grad[i] * df(p.value[i], self.value[i]);
  });
}

int64_t PoolOut(int64_t in, int64_t k, int64_t s, int64_t pad) {
  if (k <= 0 || s <= 0 || in + 2 * pad < k) throw ShapeError("invalid window geometry");
  return (in + 2 * pad - k) / s + 1;
}

}  // namespace

double Var::item() const {
  if (size() != 1) throw ShapeError("item() on a tensor with " + std::to_string(size()) + " elements");
  return value()[0];
}

Var Param(Shape shape, std::vector<double> values) {
  if (NumElements(shape) != int64_t(values.size())) throw ShapeError("Param: size mismatch");
  auto n = std::make_shared<Node>();
  n->shape = std::move(shape);
  n->value = std::move(values);
  n->requires_grad = true;
  return Var(std::move(n));
}

Var Constant(Shape shape, std::vector<double> values) {
  if (NumElements(shape) != int64_t(values.size())) throw ShapeError("Constant: size mismatch");
  auto n = std::make_shared<Node>();
  n->shape = std::move(shape);
  n->value = std::move(values);
  return Var(std::move(n));
}

Var Scalar(double v, bool requires_grad) {
  return requires_grad ? Param({1}, {v}) : Constant({1}, {v});
}

Var Add(const Var& a, const Var& b) {
  SameShape(a, b, "Add");
  std::vector<double> v(a.value());
  for (size_t i = 0; i < v.size(); ++i) v[i] += b.value()[i];
  return Make(a.shape(), std::move(v), {a.ptr(), b.ptr()}, "add", [](Node& self) {
    for (auto& p : self.parents) {
      if (!p->requires_grad) continue;
      auto& g = G(*p);
      for (size_t i = 0; i < g.size(); ++i) g[i] += self.grad[i];
    }
  });
}

Var Sub(const Var& a, const Var& b) { return Add(a, Scale(b, -1.0)); }

Var Mul(const Var& a, const Var& b) {
  SameShape(a, b, "Mul");
  std::vector<double> v(a.value());
  for (size_t i = 0; i < v.size(); ++i) v[i] *= b.value()[i];
  return Make(a.shape(), std::move(v), {a.ptr(), b.ptr()}, "mul", [](Node& self) {
    Node& x = *self.parents[0];
    Node& y = *self.parents[1];
    if (x.requires_grad) {
      auto& g = G(x);
      for (size_t i = 0; i < g.size(); ++i) g[i] += self.grad[i] * y.value[i];
    }
    if (y.requires_grad) {
      auto& g = G(y);
      for (size_t i = 0; i < g.size(); ++i) g[i] += self.grad[i] * x.value[i];
    }
  });
}

Var Scale(const Var& a, double s) {
  return Unary(a, "scale", [s](double x) { return s * x; },
               [s](double, double) { return s; });
}

Var ScaleBy(const Var& a, const Var& s) {
  CheckScalar(s, "ScaleBy");
  const double k = s.item();
  std::vector<double> v(a.value());
  for (auto& e : v) e *= k;
  return Make(a.shape(), std::move(v), {a.ptr(), s.ptr()}, "scale_by", [](Node& self) {
    Node& x = *self.parents[0];
    Node& sc = *self.parents[1];
    if (x.requires_grad) {
      auto& g = G(x);
      for (size_t i = 0; i < g.size(); ++i) g[i] += self.grad[i] * sc.value[0];
    }
    if (sc.requires_grad) {
      double acc = 0;
      for (size_t i = 0; i < self.grad.size(); ++i) acc += self.grad[i] * x.value[i];
      G(sc)[0] += acc;
    }
  });
}

Var Square(const Var& a) {
  return Unary(a, "square", [](double x) { return x * x; },
               [](double x, double) { return 2 * x; });
}

Var Relu(const Var& a) {
  return Unary(a, "relu", [](double x) { return x > 0 ? x : 0.0; },
               [](double x, double) { return x > 0 ? 1.0 : 0.0; });
}

Var X2Act(const Var& x, const Var& w1, const Var& w2, const Var& b, double k) {
  CheckScalar(w1, "X2Act");
  CheckScalar(w2, "X2Act");
  CheckScalar(b, "X2Act");
  const double a = k * w1.item(), c = w2.item(), d = b.item();
  std::vector<double> v(x.value().size());
  for (size_t i = 0; i < v.size(); ++i) {
    const double t = x.value()[i];
    v[i] = a * t * t + c * t + d;
  }
  return Make(x.shape(), std::move(v), {x.ptr(), w1.ptr(), w2.ptr(), b.ptr()}, "x2act",
              [k](Node& self) {
                Node& xn = *self.parents[0];
                Node& w1n = *self.parents[1];
                Node& w2n = *self.parents[2];
                Node& bn = *self.parents[3];
                const double a = k * w1n.value[0], c = w2n.value[0];
                double g1 = 0, g2 = 0, gb = 0;
                std::vector<double>* gx = xn.requires_grad ? &G(xn) : nullptr;
                for (size_t i = 0; i < self.grad.size(); ++i) {
                  const double t = xn.value[i], g = self.grad[i];
                  if (gx) (*gx)[i] += g * (2 * a * t + c);
                  g1 += g * k * t * t;
                  g2 += g * t;
                  gb += g;
                }
                if (w1n.requires_grad) G(w1n)[0] += g1;
                if (w2n.requires_grad) G(w2n)[0] += g2;
                if (bn.requires_grad) G(bn)[0] += gb;
              });
}

Var Reshape(const Var& a, Shape shape) {
  if (NumElements(shape) != a.size()) {
    throw ShapeError("Reshape: " + ShapeString(a.shape()) + " to " + ShapeString(shape));
  }
  return Make(std::move(shape), a.value(), {a.ptr()}, "reshape", [](Node& self) {
    Node& p = *self.parents[0];
    if (!p.requires_grad) return;
    auto& g = G(p);
    for (size_t i = 0; i < g.size(); ++i) g[i] += self.grad[i];
  });
}

Var MatMul(const Var& a, const Var& b) {
  CheckRank(a, 2, "MatMul");
  CheckRank(b, 2, "MatMul");
  const int64_t m = a.shape()[0], k = a.shape()[1], n = b.shape()[1];
  if (b.shape()[0] != k) throw ShapeError("MatMul: inner dimensions differ");
  std::vector<double> v(size_t(m * n), 0.0);
  for (int64_t i = 0; i < m; ++i) {
    for (int64_t t = 0; t < k; ++t) {
      const double x = a.value()[i * k + t];
      for (int64_t j = 0; j < n; ++j) v[i * n + j] += x * b.value()[t * n + j];
    }
  }
  return Make({m, n}, std::move(v), {a.ptr(), b.ptr()}, "matmul", [m, k, n](Node& self) {
    Node& A = *self.parents[0];
    Node& B = *self.parents[1];
    if (A.requires_grad) {
      auto& g = G(A);
      for (int64_t i = 0; i < m; ++i) {
        for (int64_t t = 0; t < k; ++t) {
          double acc = 0;
          for (int64_t j = 0; j < n; ++j) acc += self.grad[i * n + j] * B.value[t * n + j];
          g[i * k + t] += acc;
        }
      }
    }
    if (B.requires_grad) {
      auto& g = G(B);
      for (int64_t i = 0; i < m; ++i) {
        for (int64_t t = 0; t < k; ++t) {
          const double x = A.value[i * k + t];
          for (int64_t j = 0; j < n; ++j) g[t * n + j] += x * self.grad[i * n + j];
        }
      }
    }
  });
}

Var Linear(const Var& x, const Var& w, const Var& b) {
  CheckRank(x, 2, "Linear");
  CheckRank(w, 2, "Linear");
  const int64_t B = x.shape()[0], N = x.shape()[1], O = w.shape()[0];
  if (w.shape()[1] != N || b.shape() != Shape{O}) throw ShapeError("Linear: parameter shapes");
  std::vector<double> v(size_t(B * O));
  for (int64_t s = 0; s < B; ++s) {
    for (int64_t o = 0; o < O; ++o) {
      double acc = b.value()[o];
      for (int64_t i = 0; i < N; ++i) acc += w.value()[o * N + i] * x.value()[s * N + i];
      v[s * O + o] = acc;
    }
  }
  return Make({B, O}, std::move(v), {x.ptr(), w.ptr(), b.ptr()}, "linear",
              [B, N, O](Node& self) {
                Node& X = *self.parents[0];
                Node& W = *self.parents[1];
                Node& Bn = *self.parents[2];
                std::vector<double>* gx = X.requires_grad ? &G(X) : nullptr;
                std::vector<double>* gw = W.requires_grad ? &G(W) : nullptr;
                std::vector<double>* gb = Bn.requires_grad ? &G(Bn) : nullptr;
                for (int64_t s = 0; s < B; ++s) {
                  for (int64_t o = 0; o < O; ++o) {
                    const double g = self.grad[s * O + o];
                    if (gb) (*gb)[o] += g;
                    for (int64_t i = 0; i < N; ++i) {
                      if (gx) (*gx)[s * N + i] += g * W.value[o * N + i];
                      if (gw) (*gw)[o * N + i] += g * X.value[s * N + i];
                    }
                  }
                }
              });
}

Var Conv2d(const Var& x, const Var& w, const Var& b, int64_t stride, int64_t padding) {
  CheckRank(x, 4, "Conv2d");
  CheckRank(w, 4, "Conv2d");
  const int64_t B = x.shape()[0], C = x.shape()[1], H = x.shape()[2], W = x.shape()[3];
  const int64_t O = w.shape()[0], K = w.shape()[2];
  if (w.shape()[1] != C || w.shape()[3] != K || b.shape() != Shape{O}) {
    throw ShapeError("Conv2d: parameter shapes " + ShapeString(w.shape()));
  }
  const int64_t OH = PoolOut(H, K, stride, padding), OW = PoolOut(W, K, stride, padding);
  std::vector<double> v(size_t(B * O * OH * OW));
  const auto& xv = x.value();
  const auto& wv = w.value();
  for (int64_t s = 0; s < B; ++s) {
    for (int64_t o = 0; o < O; ++o) {
      for (int64_t i = 0; i < OH; ++i) {
        for (int64_t j = 0; j < OW; ++j) {
          double acc = b.value()[o];
          for (int64_t c = 0; c < C; ++c) {
            for (int64_t p = 0; p < K; ++p) {
              const int64_t y = i * stride + p - padding;
              if (y < 0 || y >= H) continue;
              for (int64_t q = 0; q < K; ++q) {
                const int64_t z = j * stride + q - padding;
                if (z < 0 || z >= W) continue;
                acc += wv[((o * C + c) * K + p) * K + q] * xv[((s * C + c) * H + y) * W + z];
              }
            }
          }
          v[((s * O + o) * OH + i) * OW + j] = acc;
        }
      }
    }
  }
  return Make({B, O, OH, OW}, std::move(v), {x.ptr(), w.ptr(), b.ptr()}, "conv2d",
              [=](Node& self) {
                Node& X = *self.parents[0];
                Node& Wn = *self.parents[1];
                Node& Bn = *self.parents[2];
                std::vector<double>* gx = X.requires_grad ? &G(X) : nullptr;
                std::vector<double>* gw = Wn.requires_grad ? &G(Wn) : nullptr;
                std::vector<double>* gb = Bn.requires_grad ? &G(Bn) : nullptr;
                for (int64_t s = 0; s < B; ++s) {
                  for (int64_t o = 0; o < O; ++o) {
                    for (int64_t i = 0; i < OH; ++i) {
                      for (int64_t j = 0; j < OW; ++j) {
                        const double g = self.grad[((s * O + o) * OH + i) * OW + j];
                        if (g == 0) continue;
                        if (gb) (*gb)[o] += g;
                        for (int64_t c = 0; c < C; ++c) {
                          for (int64_t p = 0; p < K; ++p) {
                            const int64_t y = i * stride + p - padding;
                            if (y < 0 || y >= H) continue;
                            for (int64_t q = 0; q < K; ++q) {
                              const int64_t z = j * stride + q - padding;
                              if (z < 0 || z >= W) continue;
                              const int64_t wi = ((o * C + c) * K + p) * K + q;
                              const int64_t xi = ((s * C + c) * H + y) * W + z;
                              if (gw) (*gw)[wi] += g * X.value[xi];
                              if (gx) (*gx)[xi] += g * Wn.value[wi];
                            }
                          }
                        }
                      }
                    }
                  }
                }
              });
}

namespace {

Var Pool(const Var& x, int64_t k, int64_t stride, bool is_max) {
  CheckRank(x, 4, "Pool2d");
  const int64_t B = x.shape()[0], C = x.shape()[1], H = x.shape()[2], W = x.shape()[3];
  const int64_t OH = PoolOut(H, k, stride, 0), OW = PoolOut(W, k, stride, 0);
  const int64_t n = B * C * OH * OW;
  std::vector<double> v(static_cast<size_t>(n));
  std::vector<int64_t> arg(is_max ? static_cast<size_t>(n) : 0);
  for (int64_t sc = 0; sc < B * C; ++sc) {
    for (int64_t i = 0; i < OH; ++i) {
      for (int64_t j = 0; j < OW; ++j) {
        double best = -INFINITY, sum = 0;
        int64_t best_at = -1;
        for (int64_t p = 0; p < k; ++p) {
          for (int64_t q = 0; q < k; ++q) {
            const int64_t xi = (sc * H + i * stride + p) * W + j * stride + q;
            const double e = x.value()[xi];
            sum += e;
            if (e > best) {
              best = e;
              best_at = xi;
            }
          }
        }
        const int64_t o = (sc * OH + i) * OW + j;
        v[o] = is_max ? best : sum / double(k * k);
        if (is_max) arg[o] = best_at;
      }
    }
  }
  return Make({B, C, OH, OW}, std::move(v), {x.ptr()}, is_max ? "maxpool" : "avgpool",
              [=](Node& self) {
                Node& X = *self.parents[0];
                auto& g = G(X);
                if (is_max) {
                  for (int64_t o = 0; o < n; ++o) g[arg[o]] += self.grad[o];
                  return;
                }
                const double inv = 1.0 / double(k * k);
                for (int64_t sc = 0; sc < B * C; ++sc) {
                  for (int64_t i = 0; i < OH; ++i) {
                    for (int64_t j = 0; j < OW; ++j) {
                      const double gi = self.grad[(sc * OH + i) * OW + j] * inv;
                      for (int64_t p = 0; p < k; ++p) {
                        for (int64_t q = 0; q < k; ++q) {
                          g[(sc * H + i * stride + p) * W + j * stride + q] += gi;
                        }
                      }
                    }
                  }
                }
              });
}

}  // namespace

Var MaxPool2d(const Var& x, int64_t k, int64_t stride) { return Pool(x, k, stride, true); }
Var AvgPool2d(const Var& x, int64_t k, int64_t stride) { return Pool(x, k, stride, false); }

Var Softmax(const Var& a) {
  CheckRank(a, 1, "Softmax");
  const double mx = *std::max_element(a.value().begin(), a.value().end());
  std::vector<double> v(a.value().size());
  double z = 0;
  for (size_t i = 0; i < v.size(); ++i) z += v[i] = std::exp(a.value()[i] - mx);
  for (auto& e : v) e /= z;
  return Make(a.shape(), std::move(v), {a.ptr()}, "softmax", [](Node& self) {
    Node& p = *self.parents[0];
    double dot = 0;
    for (size_t i = 0; i < self.value.size(); ++i) dot += self.grad[i] * self.value[i];
    auto& g = G(p);
    for (size_t i = 0; i < g.size(); ++i) g[i] += self.value[i] * (self.grad[i] - dot);
  });
}

Var WeightedSum(const std::vector<Var>& xs, const Var& theta) {
  CheckRank(theta, 1, "WeightedSum");
  if (xs.empty() || int64_t(xs.size()) != theta.size()) {
    throw ShapeError("WeightedSum: " + std::to_string(xs.size()) + " inputs for " +
                     std::to_string(theta.size()) + " weights");
  }
  std::vector<double> v(xs[0].value().size(), 0.0);
  std::vector<NodePtr> parents{theta.ptr()};
  for (size_t k = 0; k < xs.size(); ++k) {
    SameShape(xs[k], xs[0], "WeightedSum");
    const double t = theta.value()[k];
    for (size_t i = 0; i < v.size(); ++i) v[i] += t * xs[k].value()[i];
    parents.push_back(xs[k].ptr());
  }
  return Make(xs[0].shape(), std::move(v), std::move(parents), "weighted_sum", [](Node& self) {
    Node& th = *self.parents[0];
    for (size_t k = 1; k < self.parents.size(); ++k) {
      Node& x = *self.parents[k];
      if (th.requires_grad) {
        double acc = 0;
        for (size_t i = 0; i < self.grad.size(); ++i) acc += self.grad[i] * x.value[i];
        G(th)[k - 1] += acc;
      }
      if (x.requires_grad) {
        auto& g = G(x);
        const double t = th.value[k - 1];
        for (size_t i = 0; i < g.size(); ++i) g[i] += t * self.grad[i];
      }
    }
  });
}

Var Dot(const Var& a, const std::vector<double>& c) {
  if (int64_t(c.size()) != a.size()) throw ShapeError("Dot: length mismatch");
  double acc = 0;
  for (size_t i = 0; i < c.size(); ++i) acc += a.value()[i] * c[i];
  return Make({1}, {acc}, {a.ptr()}, "dot", [c](Node& self) {
    auto& g = G(*self.parents[0]);
    for (size_t i = 0; i < g.size(); ++i) g[i] += self.grad[0] * c[i];
  });
}

Var Sum(const Var& a) {
  double acc = 0;
  for (double e : a.value()) acc += e;
  return Make({1}, {acc}, {a.ptr()}, "sum", [](Node& self) {
    auto& g = G(*self.parents[0]);
    for (auto& e : g) e += self.grad[0];
  });
}

Var Mean(const Var& a) { return Scale(Sum(a), 1.0 / double(a.size())); }

Var SoftmaxCrossEntropy(const Var& logits, const std::vector<int>& labels) {
  CheckRank(logits, 2, "SoftmaxCrossEntropy");
  const int64_t B = logits.shape()[0], K = logits.shape()[1];
  if (int64_t(labels.size()) != B) throw ShapeError("SoftmaxCrossEntropy: label count");
  std::vector<double> probs(size_t(B * K));
  double loss = 0;
  for (int64_t s = 0; s < B; ++s) {
    if (labels[s] < 0 || labels[s] >= K) throw ShapeError("label out of range");
    const double* row = &logits.value()[s * K];
    const double mx = *std::max_element(row, row + K);
    double z = 0;
    for (int64_t k = 0; k < K; ++k) z += probs[s * K + k] = std::exp(row[k] - mx);
    for (int64_t k = 0; k < K; ++k) probs[s * K + k] /= z;
    loss -= std::log(std::max(probs[s * K + labels[s]], 1e-300));
  }
  loss /= double(B);
  return Make({1}, {loss}, {logits.ptr()}, "softmax_ce", [probs, labels, B, K](Node& self) {
    auto& g = G(*self.parents[0]);
    const double scale = self.grad[0] / double(B);
    for (int64_t s = 0; s < B; ++s) {
      for (int64_t k = 0; k < K; ++k) {
        g[s * K + k] += scale * (probs[s * K + k] - (k == labels[s] ? 1.0 : 0.0));
      }
    }
  });
}

void Backward(const Var& root) {
  if (root.size() != 1) throw ShapeError("Backward needs a one-element root");
  if (!std::isfinite(root.item())) {
    throw NumericError("non-finite loss " + std::to_string(root.item()));
  }
  // Iterative post-order DFS for a topological order.
  std::vector<Node*> order;
  std::unordered_set<Node*> seen;
  std::vector<std::pair<Node*, size_t>> stack{{root.node(), 0}};
  seen.insert(root.node());
  while (!stack.empty()) {
    auto& [n, next] = stack.back();
    if (next < n->parents.size()) {
      Node* p = n->parents[next++].get();
      if (p->requires_grad && seen.insert(p).second) stack.push_back({p, 0});
    } else {
      order.push_back(n);
      stack.pop_back();
    }
  }
  for (Node* n : order) n->grad.assign(n->value.size(), 0.0);
  root.node()->grad[0] = 1.0;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    if ((*it)->backward) (*it)->backward(**it);
  }
  for (Node* n : order) {
    for (double g : n->grad) {
      if (!std::isfinite(g)) throw NumericError(std::string("non-finite gradient at ") + n->op);
    }
  }
}

}  // namespace pinas::ad
