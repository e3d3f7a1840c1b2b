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

#include "pinas/ops/model.h"

#include <cmath>
#include <filesystem>
#include <fstream>

#include "json.hpp"
#include "pinas/common/errors.h"
#include "pinas/ring/tensor_io.h"

namespace pinas {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct KindName {
  LayerKind kind;
  const char* name;
};
constexpr KindName kKinds[] = {
    {LayerKind::kConv, "conv"},       {LayerKind::kFc, "fc"},
    {LayerKind::kRelu, "relu"},       {LayerKind::kMaxPool, "maxpool"},
    {LayerKind::kAvgPool, "avgpool"}, {LayerKind::kX2Act, "x2act"},
};

int64_t PoolOut(int64_t in, int64_t k, int64_t s, int64_t pad) {
  if (k <= 0 || s <= 0) throw ShapeError("kernel and stride must be positive");
  if (in + 2 * pad < k) throw ShapeError("window larger than padded input");
  return (in + 2 * pad - k) / s + 1;
}

template <class T>
T Get(const json& j, const char* key, T fallback) {
  auto it = j.find(key);
  return it == j.end() ? fallback : it->get<T>();
}

}  // namespace

const char* LayerKindName(LayerKind k) {
  for (const auto& e : kKinds) {
    if (e.kind == k) return e.name;
  }
  return "?";
}

LayerKind ParseLayerKind(const std::string& s) {
  for (const auto& e : kKinds) {
    if (s == e.name) return e.kind;
  }
  throw ConfigError("unknown layer kind '" + s + "'");
}

double X2ActCoeffs::scale() const { return c * w1 / std::sqrt(n_x); }

double X2ActCoeffs::Eval(double x) const { return scale() * x * x + w2 * x + b; }

double X2ActCoeffs::LowerBound() const {
  if (!(w1 > 0)) throw ConfigError("x2act lower bound needs w1 > 0");
  return b - w2 * w2 * std::sqrt(n_x) / (4.0 * c * w1);
}

LayerSpec LayerSpec::Conv(std::string name, FixedTensor w, FixedTensor b,
                          int64_t stride, int64_t padding) {
  if (w.shape().size() != 4) throw ShapeError("conv weight must be [OC,IC,KH,KW]");
  LayerSpec l;
  l.kind = LayerKind::kConv;
  l.name = std::move(name);
  l.out_channels = w.shape()[0];
  l.in_channels = w.shape()[1];
  l.kernel_h = w.shape()[2];
  l.kernel_w = w.shape()[3];
  l.stride_h = l.stride_w = stride;
  l.padding = padding;
  l.weight = std::move(w);
  l.bias = std::move(b);
  return l;
}

LayerSpec LayerSpec::Fc(std::string name, FixedTensor w, FixedTensor b) {
  if (w.shape().size() != 2) throw ShapeError("fc weight must be [OUT,IN]");
  LayerSpec l;
  l.kind = LayerKind::kFc;
  l.name = std::move(name);
  l.out_channels = w.shape()[0];
  l.in_channels = w.shape()[1];
  l.weight = std::move(w);
  l.bias = std::move(b);
  return l;
}

LayerSpec LayerSpec::Relu(std::string name) {
  LayerSpec l;
  l.kind = LayerKind::kRelu;
  l.name = std::move(name);
  return l;
}

LayerSpec LayerSpec::MaxPool(std::string name, int64_t k, int64_t stride) {
  LayerSpec l;
  l.kind = LayerKind::kMaxPool;
  l.name = std::move(name);
  l.kernel_h = l.kernel_w = k;
  l.stride_h = l.stride_w = stride;
  return l;
}

LayerSpec LayerSpec::AvgPool(std::string name, int64_t k, int64_t stride) {
  LayerSpec l = MaxPool(std::move(name), k, stride);
  l.kind = LayerKind::kAvgPool;
  return l;
}

LayerSpec LayerSpec::X2Act(std::string name, X2ActCoeffs c) {
  if (!(c.n_x > 0)) throw ConfigError("x2act needs n_x > 0");
  LayerSpec l;
  l.kind = LayerKind::kX2Act;
  l.name = std::move(name);
  l.x2act = c;
  return l;
}

Shape LayerOutputShape(const LayerSpec& l, const Shape& in) {
  const std::string where = "layer '" + l.name + "': ";
  switch (l.kind) {
    case LayerKind::kConv: {
      if (in.size() != 3 || in[0] != l.in_channels) {
        throw ShapeError(where + "conv expects [" + std::to_string(l.in_channels) +
                         ",H,W], got " + ShapeString(in));
      }
      if (l.weight.shape() != Shape{l.out_channels, l.in_channels, l.kernel_h, l.kernel_w}) {
        throw ShapeError(where + "weight shape " + ShapeString(l.weight.shape()));
      }
      if (l.bias.shape() != Shape{l.out_channels}) {
        throw ShapeError(where + "bias shape " + ShapeString(l.bias.shape()));
      }
      return {l.out_channels, PoolOut(in[1], l.kernel_h, l.stride_h, l.padding),
              PoolOut(in[2], l.kernel_w, l.stride_w, l.padding)};
    }
    case LayerKind::kFc:
      if (NumElements(in) != l.in_channels) {
        throw ShapeError(where + "fc expects " + std::to_string(l.in_channels) +
                         " inputs, got " + ShapeString(in));
      }
      if (l.weight.shape() != Shape{l.out_channels, l.in_channels} ||
          l.bias.shape() != Shape{l.out_channels}) {
        throw ShapeError(where + "fc parameter shapes");
      }
      return {l.out_channels};
    case LayerKind::kMaxPool:
    case LayerKind::kAvgPool:
      if (in.size() != 3) throw ShapeError(where + "pooling expects [C,H,W]");
      return {in[0], PoolOut(in[1], l.kernel_h, l.stride_h, 0),
              PoolOut(in[2], l.kernel_w, l.stride_w, 0)};
    case LayerKind::kRelu:
    case LayerKind::kX2Act:
      return in;
  }
  throw ShapeError(where + "unknown kind");
}

std::vector<Shape> ModelSpec::Shapes() const {
  std::vector<Shape> out{input_shape};
  for (const auto& l : layers) out.push_back(LayerOutputShape(l, out.back()));
  return out;
}

void ModelSpec::Validate() const {
  ring.Validate();
  if (input_shape.empty()) throw ShapeError("model has no input shape");
  for (const auto& l : layers) {
    if ((l.kind == LayerKind::kConv || l.kind == LayerKind::kFc) &&
        (!(l.weight.config() == ring) || !(l.bias.config() == ring))) {
      throw ConfigError("layer '" + l.name + "' weights use a different ring");
    }
    if (l.kind == LayerKind::kX2Act && !(l.x2act.n_x > 0)) {
      throw ConfigError("layer '" + l.name + "' needs n_x > 0");
    }
  }
  Shapes();
}

double FanInBefore(const ModelSpec& model, size_t i) {
  for (size_t j = i; j-- > 0;) {
    const auto& l = model.layers[j];
    if (l.kind == LayerKind::kConv) return double(l.in_channels * l.kernel_h * l.kernel_w);
    if (l.kind == LayerKind::kFc) return double(l.in_channels);
  }
  return double(NumElements(model.input_shape));
}

ModelSpec PolynomialVariant(const ModelSpec& model) {
  ModelSpec out = model;
  out.name = model.name + "-poly";
  for (size_t i = 0; i < out.layers.size(); ++i) {
    LayerSpec& l = out.layers[i];
    if (l.kind == LayerKind::kRelu) {
      X2ActCoeffs c;
      c.n_x = FanInBefore(model, i);
      l = LayerSpec::X2Act(l.name, c);
    } else if (l.kind == LayerKind::kMaxPool) {
      l.kind = LayerKind::kAvgPool;
    }
  }
  return out;
}

ModelSpec BaselineVariant(const ModelSpec& model) {
  ModelSpec out = model;
  out.name = model.name + "-baseline";
  for (LayerSpec& l : out.layers) {
    if (l.kind == LayerKind::kX2Act) {
      l = LayerSpec::Relu(l.name);
    } else if (l.kind == LayerKind::kAvgPool) {
      l.kind = LayerKind::kMaxPool;
    }
  }
  return out;
}

ModelSpec LoadModel(const std::string& json_path) {
  std::ifstream in(json_path);
  if (!in) throw IoError("cannot open model " + json_path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw FormatError("model " + json_path + ": " + e.what());
  }
  const fs::path dir = fs::path(json_path).parent_path();
  ModelSpec m;
  try {
    m.name = Get<std::string>(j, "name", "model");
    m.ring.ring_bits = j.at("ring_bits").get<int>();
    m.ring.frac_bits = j.at("frac_bits").get<int>();
    m.ring.Validate();
    m.input_shape = j.at("input_shape").get<Shape>();
    auto tensor = [&](const json& lj, const char* key) {
      FixedTensor t = LoadTensor((dir / lj.at(key).get<std::string>()).string());
      if (!(t.config() == m.ring)) {
        throw ConfigError(std::string(key) + " tensor ring differs from model ring");
      }
      return t;
    };
    for (const json& lj : j.at("layers")) {
      const LayerKind kind = ParseLayerKind(lj.at("kind").get<std::string>());
      const std::string name = Get<std::string>(lj, "name", LayerKindName(kind));
      switch (kind) {
        case LayerKind::kConv:
          m.layers.push_back(LayerSpec::Conv(name, tensor(lj, "weight"), tensor(lj, "bias"),
                                             Get<int64_t>(lj, "stride", 1),
                                             Get<int64_t>(lj, "padding", 0)));
          break;
        case LayerKind::kFc:
          m.layers.push_back(LayerSpec::Fc(name, tensor(lj, "weight"), tensor(lj, "bias")));
          break;
        case LayerKind::kRelu:
          m.layers.push_back(LayerSpec::Relu(name));
          break;
        case LayerKind::kMaxPool:
        case LayerKind::kAvgPool: {
          const int64_t k = lj.at("kernel").get<int64_t>();
          const int64_t s = Get<int64_t>(lj, "stride", k);
          m.layers.push_back(kind == LayerKind::kMaxPool ? LayerSpec::MaxPool(name, k, s)
                                                         : LayerSpec::AvgPool(name, k, s));
          break;
        }
        case LayerKind::kX2Act: {
          const json& c = lj.at("x2act");
          X2ActCoeffs x;
          x.w1 = c.at("w1").get<double>();
          x.w2 = c.at("w2").get<double>();
          x.b = c.at("b").get<double>();
          x.c = Get<double>(c, "c", 1.0);
          x.n_x = c.at("n_x").get<double>();
          m.layers.push_back(LayerSpec::X2Act(name, x));
          break;
        }
      }
    }
  } catch (const json::exception& e) {
    throw FormatError("model " + json_path + ": " + e.what());
  }
  m.Validate();
  return m;
}

void SaveModel(const std::string& json_path, const ModelSpec& model) {
  model.Validate();
  const fs::path path(json_path);
  const std::string stem = path.stem().string();
  json j;
  j["name"] = model.name;
  j["ring_bits"] = model.ring.ring_bits;
  j["frac_bits"] = model.ring.frac_bits;
  j["input_shape"] = model.input_shape;
  j["layers"] = json::array();
  for (const auto& l : model.layers) {
    json lj;
    lj["kind"] = LayerKindName(l.kind);
    lj["name"] = l.name;
    switch (l.kind) {
      case LayerKind::kConv:
      case LayerKind::kFc: {
        const std::string w = stem + "." + l.name + ".w.fxt";
        const std::string b = stem + "." + l.name + ".b.fxt";
        SaveTensor((path.parent_path() / w).string(), l.weight);
        SaveTensor((path.parent_path() / b).string(), l.bias);
        lj["weight"] = w;
        lj["bias"] = b;
        if (l.kind == LayerKind::kConv) {
          lj["stride"] = l.stride_h;
          lj["padding"] = l.padding;
        }
        break;
      }
      case LayerKind::kMaxPool:
      case LayerKind::kAvgPool:
        lj["kernel"] = l.kernel_h;
        lj["stride"] = l.stride_h;
        break;
      case LayerKind::kX2Act:
        lj["x2act"] = {{"w1", l.x2act.w1}, {"w2", l.x2act.w2}, {"b", l.x2act.b},
                       {"c", l.x2act.c},   {"n_x", l.x2act.n_x}};
        break;
      case LayerKind::kRelu:
        break;
    }
    j["layers"].push_back(lj);
  }
  std::ofstream out(json_path);
  if (!out) throw IoError("cannot write model " + json_path);
  out << j.dump(2) << '\n';
}

}  // namespace pinas
