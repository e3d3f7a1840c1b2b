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

#include "pinas/nas/supernet_spec.h"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "pinas/common/errors.h"

namespace pinas {

std::string Candidate::Label(bool with_pool) const {
  std::string s = LayerKindName(act);
  if (with_pool) s += std::string("+") + LayerKindName(pool);
  return s;
}

std::vector<Candidate> SupernetSpec::ActPoolCandidates() {
  return {{LayerKind::kRelu, LayerKind::kMaxPool},
          {LayerKind::kRelu, LayerKind::kAvgPool},
          {LayerKind::kX2Act, LayerKind::kMaxPool},
          {LayerKind::kX2Act, LayerKind::kAvgPool}};
}

std::vector<Candidate> SupernetSpec::ActCandidates() {
  return {{LayerKind::kRelu, LayerKind::kMaxPool}, {LayerKind::kX2Act, LayerKind::kMaxPool}};
}

SupernetSpec SupernetSpec::Toy(int64_t classes) {
  SupernetSpec s;
  s.name = "toy";
  s.input_shape = {1, 8, 8};
  s.num_classes = classes;
  SupernetLayer a;
  a.name = "conv1";
  a.out_channels = 4;
  a.has_pool = true;
  a.candidates = ActPoolCandidates();
  SupernetLayer b;
  b.name = "conv2";
  b.out_channels = 8;
  b.candidates = ActCandidates();
  s.layers = {a, b};
  return s;
}

SupernetSpec SupernetSpec::MiniVgg(int64_t classes) {
  SupernetSpec s;
  s.name = "mini-vgg";
  s.input_shape = {3, 16, 16};
  s.num_classes = classes;
  const int64_t channels[] = {8, 16, 16, 32};
  const bool pools[] = {true, true, false, true};
  for (int i = 0; i < 4; ++i) {
    SupernetLayer l;
    l.name = "conv" + std::to_string(i + 1);
    l.out_channels = channels[i];
    l.has_pool = pools[i];
    l.candidates = pools[i] ? ActPoolCandidates() : ActCandidates();
    s.layers.push_back(l);
  }
  return s;
}

std::vector<SupernetSpec::SlotGeometry> SupernetSpec::Geometry() const {
  if (input_shape.size() != 3 || input_shape[1] != input_shape[2]) {
    throw ShapeError("supernet input must be [C, H, H]");
  }
  std::vector<SlotGeometry> out;
  int64_t c = input_shape[0], size = input_shape[1];
  for (const auto& l : layers) {
    SlotGeometry g;
    g.in_channels = c;
    g.in_size = size;
    if (l.kernel <= 0 || l.stride <= 0 || size + 2 * l.padding < l.kernel) {
      throw ShapeError("supernet layer " + l.name + ": invalid conv geometry");
    }
    g.act_size = (size + 2 * l.padding - l.kernel) / l.stride + 1;
    g.out_size = g.act_size;
    if (l.has_pool) {
      if (l.pool_kernel <= 0 || l.pool_stride <= 0 || g.act_size < l.pool_kernel) {
        throw ShapeError("supernet layer " + l.name + ": invalid pool geometry");
      }
      g.out_size = (g.act_size - l.pool_kernel) / l.pool_stride + 1;
    }
    out.push_back(g);
    c = l.out_channels;
    size = g.out_size;
  }
  return out;
}

void SupernetSpec::Validate() const {
  if (num_classes < 2) throw ConfigError("supernet needs at least two classes");
  if (layers.empty()) throw ConfigError("supernet has no layers");
  for (const auto& l : layers) {
    if (l.out_channels <= 0) throw ConfigError("layer " + l.name + ": no output channels");
    if (l.candidates.empty()) throw ConfigError("layer " + l.name + ": no candidates");
    for (const auto& c : l.candidates) {
      if (c.act != LayerKind::kRelu && c.act != LayerKind::kX2Act) {
        throw ConfigError("layer " + l.name + ": candidate activation must be relu or x2act");
      }
      if (l.has_pool && c.pool != LayerKind::kMaxPool && c.pool != LayerKind::kAvgPool) {
        throw ConfigError("layer " + l.name + ": candidate pool must be maxpool or avgpool");
      }
    }
  }
  Geometry();
}

std::string SupernetSpecToJson(const SupernetSpec& s) {
  nlohmann::ordered_json j;
  j["name"] = s.name;
  j["input_shape"] = s.input_shape;
  j["num_classes"] = s.num_classes;
  j["layers"] = nlohmann::ordered_json::array();
  for (const auto& l : s.layers) {
    nlohmann::ordered_json o;
    o["name"] = l.name;
    o["out_channels"] = l.out_channels;
    o["kernel"] = l.kernel;
    o["stride"] = l.stride;
    o["padding"] = l.padding;
    if (l.has_pool) o["pool"] = {{"kernel", l.pool_kernel}, {"stride", l.pool_stride}};
    std::vector<std::string> labels;
    for (const auto& c : l.candidates) labels.push_back(c.Label(l.has_pool));
    o["candidates"] = labels;
    j["layers"].push_back(o);
  }
  return j.dump(2) + "\n";
}

SupernetSpec SupernetSpecFromJson(const std::string& text) {
  SupernetSpec s;
  try {
    const auto j = nlohmann::json::parse(text);
    s.name = j.at("name").get<std::string>();
    s.input_shape = j.at("input_shape").get<Shape>();
    s.num_classes = j.at("num_classes").get<int64_t>();
    for (const auto& o : j.at("layers")) {
      SupernetLayer l;
      l.name = o.at("name").get<std::string>();
      l.out_channels = o.at("out_channels").get<int64_t>();
      l.kernel = o.value("kernel", int64_t{3});
      l.stride = o.value("stride", int64_t{1});
      l.padding = o.value("padding", int64_t{1});
      if (o.contains("pool")) {
        l.has_pool = true;
        l.pool_kernel = o["pool"].value("kernel", int64_t{2});
        l.pool_stride = o["pool"].value("stride", int64_t{2});
      }
      for (const auto& label : o.at("candidates")) {
        const std::string t = label.get<std::string>();
        const auto plus = t.find('+');
        Candidate c;
        c.act = ParseLayerKind(t.substr(0, plus));
        if (plus != std::string::npos) c.pool = ParseLayerKind(t.substr(plus + 1));
        if ((plus != std::string::npos) != l.has_pool) {
          throw ConfigError("candidate " + t + " does not match the pool setting of " + l.name);
        }
        l.candidates.push_back(c);
      }
      s.layers.push_back(l);
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad supernet JSON: ") + e.what());
  }
  s.Validate();
  return s;
}

SupernetSpec LoadSupernetSpec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open supernet " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return SupernetSpecFromJson(ss.str());
}

void SaveSupernetSpec(const std::string& path, const SupernetSpec& s) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << SupernetSpecToJson(s);
  if (!out) throw IoError("write failed for " + path);
}

SupernetSpec ResolveBackbone(const std::string& name_or_path, int64_t classes) {
  if (name_or_path == "toy") return SupernetSpec::Toy(classes);
  if (name_or_path == "mini-vgg") return SupernetSpec::MiniVgg(classes);
  return LoadSupernetSpec(name_or_path);
}

}  // namespace pinas
