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

#include "pinas/cli/commands.h"

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "pinas/common/errors.h"
#include "pinas/nas/export.h"
#include "pinas/nas/search.h"
#include "pinas/ops/inference.h"
#include "pinas/ops/plaintext.h"
#include "pinas/ot/compare.h"
#include "pinas/perf/hw_config.h"
#include "pinas/perf/latency_table.h"
#include "pinas/ring/tensor_io.h"

namespace pinas::cli {
namespace {

using Json = nlohmann::ordered_json;
namespace fs = std::filesystem;

constexpr const char* kDefaultAddr = "127.0.0.1:47400";

void WriteText(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << text;
  if (!out) throw IoError("write failed for " + path);
}

bool EndsWith(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

std::vector<double> ParseCsvNumbers(const std::string& line, const std::string& where) {
  std::vector<double> v;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    try {
      v.push_back(std::stod(cell));
    } catch (const std::exception&) {
      throw ConfigError(where + ": bad number '" + cell + "'");
    }
  }
  return v;
}

// Re-encodes every weight of the model in another ring.
ModelSpec WithRing(ModelSpec m, RingConfig ring) {
  if (m.ring == ring) return m;
  for (auto& l : m.layers) {
    if (l.weight.size() > 0) l.weight = FixedTensor::FromReals(l.weight.shape(), l.weight.ToReals(), ring);
    if (l.bias.size() > 0) l.bias = FixedTensor::FromReals(l.bias.shape(), l.bias.ToReals(), ring);
  }
  m.ring = ring;
  return m;
}

// .fxt tensors, or one CSV row of reals (an optional leading label is
// dropped when the row has one value too many).
FixedTensor LoadInput(const std::string& path, const ModelSpec& m, int row) {
  const int64_t n = NumElements(m.input_shape);
  if (EndsWith(path, ".fxt")) {
    FixedTensor t = LoadTensor(path);
    if (t.size() != n) throw ShapeError("input has " + std::to_string(t.size()) + " elements, model expects " + std::to_string(n));
    return FixedTensor::FromReals(m.input_shape, t.ToReals(), m.ring);
  }
  std::ifstream in(path);
  if (!in) throw IoError("cannot open input " + path);
  std::string line;
  int seen = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (seen++ < row) continue;
    auto v = ParseCsvNumbers(line, path);
    if (int64_t(v.size()) == n + 1) v.erase(v.begin());
    if (int64_t(v.size()) != n) {
      throw ShapeError(path + ": row has " + std::to_string(v.size()) + " values, model expects " + std::to_string(n));
    }
    return FixedTensor::FromReals(m.input_shape, v, m.ring);
  }
  throw ConfigError(path + ": no row " + std::to_string(row));
}

Json LayersJson(const std::vector<LayerStats>& layers, bool timings) {
  Json a = Json::array();
  for (const auto& l : layers) {
    Json o{{"name", l.name}, {"kind", LayerKindName(l.kind)}, {"rounds", l.rounds},
           {"payload_sent", l.payload_sent}, {"payload_recv", l.payload_recv}};
    if (timings) o["seconds"] = l.seconds;
    a.push_back(o);
  }
  return a;
}

Json LogitsJson(const FixedTensor& logits) {
  return Json{{"argmax", ArgMax(logits)}, {"logits", logits.ToReals()}};
}

void WriteLogits(const std::string& path, const FixedTensor& logits) {
  if (EndsWith(path, ".fxt")) {
    SaveTensor(path, logits);
    return;
  }
  std::ostringstream os;
  os.precision(17);
  const auto r = logits.ToReals();
  for (size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << r[i];
  os << '\n';
  WriteText(path, os.str());
}

template <class F0, class F1>
auto RunBoth(Channel& c0, Channel& c1, F0 f0, F1 f1) {
  auto fut = std::async(std::launch::async, [&] {
    try {
      return f1(c1);
    } catch (...) {
      c1.Close();
      throw;
    }
  });
  decltype(f0(c0)) r0;
  try {
    r0 = f0(c0);
  } catch (...) {
    c0.Close();
    fut.wait();
    throw;
  }
  auto r1 = fut.get();
  return std::make_pair(std::move(r0), std::move(r1));
}

// ---- dealer ----

struct DealerArgs {
  std::string model, mode = "public", out_dir = ".";
  uint64_t seed = 1;
  int count = 1;
};

void CmdDealer(const DealerArgs& a, std::ostream& out) {
  const ModelSpec m = LoadModel(a.model);
  const WeightsMode mode = ParseWeightsMode(a.mode);
  if (a.count < 1) throw ConfigError("--count must be >= 1");
  fs::create_directories(a.out_dir);
  Prg rng(a.seed);
  const auto plan = PlanMaterial(m, mode);
  auto [m0, m1] = DealerIssue(Repeat(plan, a.count), m.ring, rng);
  const fs::path dir(a.out_dir);
  SaveMaterial((dir / "material.p0.bvt").string(), m0);
  SaveMaterial((dir / "material.p1.bvt").string(), m1);
  Json j{{"model", m.name}, {"mode", WeightsModeName(mode)}, {"inferences", a.count},
         {"triples", m0.triples().size()}, {"pairs", m0.pairs().size()},
         {"files", {"material.p0.bvt", "material.p1.bvt"}}};
  if (mode == WeightsMode::kShared) {
    auto [w0, w1] = ShareWeights(m, rng);
    for (int party = 0; party < 2; ++party) {
      const auto& w = party == 0 ? w0 : w1;
      for (size_t i = 0; i < m.layers.size(); ++i) {
        if (w[i].weight.tensor.size() == 0) continue;
        const std::string stem = "shared.p" + std::to_string(party) + "." + m.layers[i].name;
        SaveTensor((dir / (stem + ".w.fxt")).string(), w[i].weight.tensor);
        SaveTensor((dir / (stem + ".b.fxt")).string(), w[i].bias.tensor);
        j["files"].push_back(stem + ".w.fxt");
        j["files"].push_back(stem + ".b.fxt");
      }
    }
  }
  out << j.dump(2) << '\n';
}

// ---- run ----

struct RunArgs {
  std::string model, input, transport = "inproc", mode = "public";
  int role = -1;
  int row = 0;
  std::string peer = kDefaultAddr, bind;
  std::string material, shared_dir;
  uint64_t seed = 1, dealer_seed = 1;
  int ring_bits = 0, frac_bits = 0;
  bool plaintext = false, timings = false;
  std::string logits_out, transcript_out, report_out;
  int timeout_ms = 30000;
};

std::vector<SharedParams> LoadSharedWeights(const std::string& dir, const ModelSpec& m, int party) {
  std::vector<SharedParams> w(m.layers.size());
  for (size_t i = 0; i < m.layers.size(); ++i) {
    const auto k = m.layers[i].kind;
    if (k != LayerKind::kConv && k != LayerKind::kFc) continue;
    const std::string stem =
        (fs::path(dir) / ("shared.p" + std::to_string(party) + "." + m.layers[i].name)).string();
    w[i].weight = Share{party, LoadTensor(stem + ".w.fxt")};
    w[i].bias = Share{party, LoadTensor(stem + ".b.fxt")};
  }
  return w;
}

void EmitRun(const RunArgs& a, const Json& summary, const Transcript* t,
             const std::vector<LayerStats>* layers, std::ostream& out) {
  if (t && !a.transcript_out.empty()) WriteText(a.transcript_out, t->ToCsv(a.timings));
  if (layers && !a.report_out.empty()) {
    Json r = summary;
    r["layers"] = LayersJson(*layers, a.timings);
    WriteText(a.report_out, r.dump(2) + "\n");
  }
  out << summary.dump(2) << '\n';
}

void CmdRun(const RunArgs& a, std::ostream& out) {
  ModelSpec m = LoadModel(a.model);
  if (a.ring_bits || a.frac_bits) {
    m = WithRing(m, {a.ring_bits ? a.ring_bits : m.ring.ring_bits,
                     a.frac_bits ? a.frac_bits : m.ring.frac_bits});
  }
  m.Validate();
  const WeightsMode mode = ParseWeightsMode(a.mode);
  const SessionInfo info{m.ring, ModelDigest(m), uint8_t(mode)};
  const bool needs_input = a.plaintext || a.transport == "inproc" || a.role == 0;
  FixedTensor x;
  if (needs_input) {
    if (a.input.empty()) throw ConfigError("--input is required");
    x = LoadInput(a.input, m, a.row);
  }

  if (a.plaintext) {
    const FixedTensor logits = PlainForward(m, x);
    if (!a.logits_out.empty()) WriteLogits(a.logits_out, logits);
    Json s{{"mode", "plaintext"}, {"model", m.name}};
    s.update(LogitsJson(logits));
    out << s.dump(2) << '\n';
    return;
  }

  Prg dealer(a.dealer_seed);
  const auto plan = PlanMaterial(m, mode);
  const std::chrono::milliseconds timeout(a.timeout_ms);

  if (a.transport == "inproc") {
    auto [m0, m1] = DealerIssue(plan, m.ring, dealer);
    std::vector<SharedParams> w0, w1;
    if (mode == WeightsMode::kShared) std::tie(w0, w1) = ShareWeights(m, dealer);
    auto [c0, c1] = MakeInProcPair();
    c0->SetRecvTimeout(timeout);
    c1->SetRecvTimeout(timeout);
    auto side = [&](int role) {
      return [&, role](Channel& ch) {
        Handshake(ch, info);
        Party p(ch, a.seed, role == 0 ? &m0 : &m1);
        RunOptions opt;
        opt.mode = mode;
        opt.shared = role == 0 ? &w0 : &w1;
        return SecureInference(p, m, role == 0 ? &x : nullptr, opt);
      };
    };
    auto [r0, r1] = RunBoth(*c0, *c1, side(0), side(1));
    if (!a.logits_out.empty()) WriteLogits(a.logits_out, r0.logits);
    const Transcript& t = c0->transcript();
    Json s{{"mode", "secure"}, {"transport", "inproc"}, {"weights", WeightsModeName(mode)},
           {"model", m.name}, {"rounds", t.rounds()},
           {"payload_bytes_sent", t.payload_bytes(Direction::kSend)},
           {"payload_bytes_recv", t.payload_bytes(Direction::kRecv)}};
    s.update(LogitsJson(r0.logits));
    EmitRun(a, s, &t, &r0.layers, out);
    return;
  }

  if (a.transport != "tcp") throw ConfigError("--transport must be inproc or tcp");
  if (a.role != 0 && a.role != 1) throw ConfigError("--role 0|1 is required with tcp");
  MaterialStore mine;
  if (!a.material.empty()) {
    mine = LoadMaterial(a.material);
    if (mine.party() != a.role) throw ConfigError("material file belongs to the other party");
  } else {
    auto both = DealerIssue(plan, m.ring, dealer);
    mine = a.role == 0 ? std::move(both.first) : std::move(both.second);
  }
  std::vector<SharedParams> shared;
  if (mode == WeightsMode::kShared) {
    if (!a.shared_dir.empty()) {
      shared = LoadSharedWeights(a.shared_dir, m, a.role);
    } else {
      auto both = ShareWeights(m, dealer);
      shared = a.role == 0 ? both.first : both.second;
    }
  }
  std::unique_ptr<Channel> ch;
  if (a.role == 0) {
    const char* env = std::getenv("PI_BIND_ADDR");
    const std::string bind = !a.bind.empty() ? a.bind : (env ? env : kDefaultAddr);
    ch = TcpListen(0, bind, timeout);
  } else {
    ch = TcpConnect(1, a.peer, timeout);
  }
  ch->SetRecvTimeout(timeout);
  Handshake(*ch, info);
  Party p(*ch, a.seed, &mine);
  RunOptions opt;
  opt.mode = mode;
  opt.shared = &shared;
  SessionResult r = SecureInference(p, m, a.role == 0 ? &x : nullptr, opt);
  const Transcript& t = ch->transcript();
  Json s{{"mode", "secure"}, {"transport", "tcp"}, {"role", a.role},
         {"weights", WeightsModeName(mode)}, {"model", m.name}, {"rounds", t.rounds()},
         {"payload_bytes_sent", t.payload_bytes(Direction::kSend)},
         {"payload_bytes_recv", t.payload_bytes(Direction::kRecv)}};
  if (a.role == 0) {
    if (!a.logits_out.empty()) WriteLogits(a.logits_out, r.logits);
    s.update(LogitsJson(r.logits));
  }
  EmitRun(a, s, &t, &r.layers, out);
}

// ---- predict ----

struct PredictArgs {
  std::string model, hw, variant = "as-is", format = "json", out_path;
  bool per_layer = false;
};

HwProfile LoadHwOrDefault(const std::string& path) {
  return path.empty() ? HwProfile{} : LoadHwProfile(path);
}

void CmdPredict(const PredictArgs& a, std::ostream& out) {
  ModelSpec m = LoadModel(a.model);
  if (a.variant == "polynomial") {
    m = PolynomialVariant(m);
  } else if (a.variant == "baseline") {
    m = BaselineVariant(m);
  } else if (a.variant != "as-is") {
    throw ConfigError("--variant must be as-is, polynomial or baseline");
  }
  const HwProfile h = LoadHwOrDefault(a.hw);
  h.Validate();
  const auto layers = ModelLatency(m, h);
  const double total = TotalLatency(layers);
  std::ostringstream os;
  os.precision(10);
  if (a.format == "csv") {
    os << "layer,kind,fi,ic,oc,seconds\n";
    if (a.per_layer) {
      for (const auto& l : layers) {
        os << l.name << ',' << LayerKindName(l.kind) << ',' << l.geometry.fi << ','
           << l.geometry.ic << ',' << l.geometry.oc << ',' << l.seconds << '\n';
      }
    }
    os << "total,,,,," << total << '\n';
  } else if (a.format == "json") {
    Json j{{"model", m.name}, {"hw", h.id}, {"total_s", total}};
    if (a.per_layer) {
      j["layers"] = Json::array();
      for (const auto& l : layers) {
        j["layers"].push_back({{"name", l.name}, {"kind", LayerKindName(l.kind)},
                               {"fi", l.geometry.fi}, {"ic", l.geometry.ic},
                               {"oc", l.geometry.oc}, {"seconds", l.seconds}});
      }
    }
    os << j.dump(2) << '\n';
  } else {
    throw ConfigError("--format must be json or csv");
  }
  if (!a.out_path.empty()) WriteText(a.out_path, os.str());
  out << os.str();
}

// ---- bench ----

struct BenchArgs {
  std::string op = "relu", hw, transcript_out, report_out;
  int64_t fi = 8, ic = 4, oc = 4, kernel = 3;
  int ring_bits = 32, frac_bits = 12;
  uint64_t seed = 1;
  bool timings = false;
};

void CmdBench(const BenchArgs& a, std::ostream& out) {
  const RingConfig ring{a.ring_bits, a.frac_bits};
  const HwProfile h = LoadHwOrDefault(a.hw);
  h.Validate();
  if (a.fi < 1 || a.ic < 1) throw ConfigError("--fi and --ic must be >= 1");
  OpGeometry g;
  g.fi = a.fi;
  g.ic = a.ic;
  g.oc = a.oc;
  g.kernel = a.kernel;
  g.padding = a.kernel / 2;
  Prg rng(a.seed);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  const Shape in_shape{a.ic, a.fi, a.fi};
  std::vector<double> xs(static_cast<size_t>(NumElements(in_shape)));
  for (auto& e : xs) e = u(rng);
  const FixedTensor x = FixedTensor::FromReals(in_shape, xs, ring);

  LayerSpec layer;
  double predicted = 0;
  if (a.op == "relu" || a.op == "drelu") {
    layer = LayerSpec::Relu("relu");
    predicted = LatRelu(g, h);
  } else if (a.op == "maxpool") {
    layer = LayerSpec::MaxPool("maxpool", 2, 2);
    predicted = LatMaxPool(g, h);
  } else if (a.op == "avgpool") {
    layer = LayerSpec::AvgPool("avgpool", 2, 2);
    predicted = LatAvgPool(g, h);
  } else if (a.op == "x2act") {
    X2ActCoeffs c;
    c.w1 = 0.25;
    c.n_x = double(a.ic * a.kernel * a.kernel);
    layer = LayerSpec::X2Act("x2act", c);
    predicted = LatX2Act(g, h);
  } else if (a.op == "conv") {
    std::vector<double> w(static_cast<size_t>(a.oc * a.ic * a.kernel * a.kernel));
    for (auto& e : w) e = 0.1 * u(rng);
    layer = LayerSpec::Conv("conv", FixedTensor::FromReals({a.oc, a.ic, a.kernel, a.kernel}, w, ring),
                            FixedTensor({a.oc}, ring), 1, a.kernel / 2);
    predicted = LatConv(g, h);
  } else {
    throw ConfigError("--op must be relu, drelu, maxpool, avgpool, x2act or conv");
  }
  LayerOutputShape(layer, in_shape);
  const WeightsMode mode = a.op == "conv" ? WeightsMode::kShared : WeightsMode::kPublic;
  const auto plan = a.op == "drelu" ? std::vector<MaterialRequest>{}
                                    : PlanLayerMaterial(layer, in_shape, mode);
  auto [m0, m1] = DealerIssue(plan, ring, rng);
  std::vector<SharedParams> w0(1), w1(1);
  if (a.op == "conv") {
    ModelSpec tmp;
    tmp.ring = ring;
    tmp.input_shape = in_shape;
    tmp.layers = {layer};
    std::tie(w0, w1) = ShareWeights(tmp, rng);
  }
  auto [s0, s1] = Shr(x, rng);
  auto [c0, c1] = MakeInProcPair();
  auto side = [&](int role) {
    return [&, role](Channel& ch) {
      Party p(ch, a.seed, role == 0 ? &m0 : &m1);
      const Share& s = role == 0 ? s0 : s1;
      if (a.op == "drelu") return Drelu(p, s);
      if (a.op == "relu") return Relu2pc(p, s);
      if (a.op == "maxpool") return MaxPool2pc(p, s, layer);
      if (a.op == "avgpool") return AvgPool2pc(s, layer);
      if (a.op == "x2act") return X2Act2pc(p, s, layer);
      return Conv2pc(p, s, layer, role == 0 ? w0[0] : w1[0]);
    };
  };
  const auto t0 = std::chrono::steady_clock::now();
  RunBoth(*c0, *c1, side(0), side(1));
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const Transcript& t0r = c0->transcript();
  const Transcript& t1r = c1->transcript();
  const uint64_t bits = 8 * (t0r.payload_bytes(Direction::kSend) + t1r.payload_bytes(Direction::kSend));
  Json j{{"op", a.op}, {"fi", a.fi}, {"ic", a.ic}, {"ring_bits", a.ring_bits},
         {"rounds", t0r.rounds()}, {"messages", t0r.messages(Direction::kSend) + t1r.messages(Direction::kSend)},
         {"payload_bits", bits},
         {"header_bytes", t0r.header_bytes(Direction::kSend) + t1r.header_bytes(Direction::kSend)},
         {"predicted_s", predicted}};
  if (a.op == "drelu") {
    const uint64_t model_bits = Comm1PayloadBits() + Comm2PayloadBits(g) + Comm3PayloadBits(g) + Comm4PayloadBits(g);
    j["model_payload_bits"] = model_bits;
    j["payload_matches_model"] = model_bits == bits;
  }
  if (a.timings) j["wall_s"] = wall;
  if (!a.transcript_out.empty()) WriteText(a.transcript_out, t0r.ToCsv(a.timings));
  if (!a.report_out.empty()) WriteText(a.report_out, j.dump(2) + "\n");
  out << j.dump(2) << '\n';
}

// ---- search ----

struct SearchArgs {
  std::string backbone = "toy", hw, out_path = "arch.json", log_path, data, export_path;
  double lambda = 0, noise = 0.5, entropy_stop = 0;
  int epochs = 10, batch = 32, retrain_epochs = -1;
  int64_t classes = 4, samples = 1536;
  uint64_t seed = 1;
  bool separate = false;
};

void CmdSearch(const SearchArgs& a, std::ostream& out) {
  const SupernetSpec spec = ResolveBackbone(a.backbone, a.classes);
  SupernetOptions opt;
  opt.separate_weights = a.separate;
  const Supernet net(spec, opt);
  const HwProfile h = LoadHwOrDefault(a.hw);
  h.Validate();
  const LatencyTable table = BuildLatencyTable(spec, h);

  Dataset all = a.data.empty()
                    ? MakePatterns(a.samples, spec.num_classes, a.noise, a.seed, spec.input_shape[0],
                                   spec.input_shape[1])
                    : LoadImageCsv(a.data, spec.input_shape, spec.num_classes);
  auto [trn, rest] = SplitDataset(all, 1.0 / 3.0, a.seed);
  auto [val, test] = SplitDataset(rest, 0.5, a.seed);

  SearchConfig cfg;
  cfg.epochs = a.epochs;
  cfg.batch = a.batch;
  cfg.lambda = a.lambda;
  cfg.seed = a.seed;
  cfg.entropy_stop = a.entropy_stop;
  const SearchResult r = RunSearch(net, trn, val, table, cfg);

  TrainConfig tc;
  tc.epochs = a.retrain_epochs < 0 ? a.epochs : a.retrain_epochs;
  tc.batch = a.batch;
  tc.seed = a.seed;
  Prg init(a.seed);
  const TensorSet w = TrainFixed(net, net.InitWeights(init), r.arch, trn, tc);

  Json j{{"backbone", spec.name}, {"lambda", a.lambda}, {"seed", a.seed},
         {"iterations", r.iterations}, {"stopped_on_entropy", r.stopped_on_entropy},
         {"forward_passes", r.passes.forward}, {"backward_passes", r.passes.backward},
         {"latency_s", DiscreteLatency(table, r.arch)},
         {"test_accuracy", Accuracy(net, w, r.arch, test)}};
  j["arch"] = Json::array();
  const auto theta = ThetaOf(r.alpha);
  for (size_t l = 0; l < spec.layers.size(); ++l) {
    const auto& L = spec.layers[l];
    j["arch"].push_back({{"layer", L.name}, {"candidate", r.arch[l]},
                         {"label", L.candidates[size_t(r.arch[l])].Label(L.has_pool)},
                         {"alpha", r.alpha.values[l]}, {"theta", theta[l]}});
  }
  if (!a.export_path.empty()) {
    const fs::path p(a.export_path);
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    SaveModel(a.export_path, ExportModel(net, w, r.arch));
    j["model"] = a.export_path;
  }
  WriteText(a.out_path, j.dump(2) + "\n");
  if (!a.log_path.empty()) WriteText(a.log_path, SearchLogCsv(spec, r.log));
  out << j.dump(2) << '\n';
}

// ---- demo ----

struct DemoArgs {
  std::string out_dir = "demo";
  uint64_t seed = 1;
  int epochs = 10;
};

void CmdDemo(const DemoArgs& a, std::ostream& out) {
  const fs::path dir(a.out_dir);
  fs::create_directories(dir);
  const HwProfile h;
  WriteText((dir / "hw.toml").string(),
            "# Two servers on a 1 GB/s link, 200 MHz kernels. Communication payloads\n"
            "# are modelled with 32-bit ring words.\n" +
                HwProfileToToml(h));
  const SupernetSpec spec = SupernetSpec::Toy(4);
  SaveSupernetSpec((dir / "toy_supernet.json").string(), spec);

  const Supernet net(spec);
  const Dataset all = MakePatterns(1536, 4, 0.5, a.seed);
  auto [trn, rest] = SplitDataset(all, 1.0 / 3.0, a.seed);
  auto [val, test] = SplitDataset(rest, 0.5, a.seed);
  TrainConfig tc;
  tc.epochs = a.epochs;
  tc.seed = a.seed;
  Prg init(a.seed);
  const Arch baseline{0, 0}, target{3, 1};
  const TensorSet wb = TrainFixed(net, net.InitWeights(init), baseline, trn, tc);
  // The polynomial model continues from the baseline weights while the
  // replacement ratio ramps from 0 to 1.
  const TensorSet wp =
      TrainWithReplacement(net, wb, baseline, target, {0.0, 1.0, tc.epochs}, trn, tc);
  const ModelSpec mb = ExportModel(net, wb, baseline, {64, 16}, "two-conv");
  const ModelSpec mp = ExportModel(net, wp, target, {64, 16}, "two-conv-poly");
  SaveModel((dir / "two_conv.json").string(), mb);
  SaveModel((dir / "two_conv_poly.json").string(), mp);

  std::vector<int64_t> idx(100);
  for (int64_t i = 0; i < 100; ++i) idx[size_t(i)] = i;
  const Dataset inputs = test.Subset(idx);
  SaveImageCsv((dir / "inputs.csv").string(), inputs);
  SaveTensor((dir / "sample_input.fxt").string(),
             FixedTensor::FromReals(spec.input_shape,
                                    std::vector<double>(inputs.x.begin(), inputs.x.begin() + 64),
                                    mb.ring));
  Json j{{"out_dir", a.out_dir},
         {"baseline_test_accuracy", Accuracy(net, wb, baseline, test)},
         {"polynomial_test_accuracy", Accuracy(net, wp, target, test)},
         {"baseline_latency_s", TotalLatency(ModelLatency(mb, h))},
         {"polynomial_latency_s", TotalLatency(ModelLatency(mp, h))}};
  out << j.dump(2) << '\n';
}

}  // namespace

int ExitCodeFor(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const ShapeError*>(&e) ||
      dynamic_cast<const OverflowError*>(&e)) {
    return 2;
  }
  if (dynamic_cast<const ProtocolError*>(&e)) return 3;
  if (dynamic_cast<const IoError*>(&e) || dynamic_cast<const fs::filesystem_error*>(&e)) return 4;
  return 1;
}

int Main(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"pi: two-party secure inference, latency model and architecture search"};
  app.require_subcommand(1);

  DealerArgs da;
  auto* dealer = app.add_subcommand("dealer", "Issue Beaver material for a model");
  dealer->add_option("--model", da.model, "Model JSON")->required();
  dealer->add_option("--mode", da.mode, "public|shared weights");
  dealer->add_option("--seed", da.seed, "Dealer seed");
  dealer->add_option("--count", da.count, "Number of inferences to cover");
  dealer->add_option("--out-dir", da.out_dir, "Output directory");

  RunArgs ra;
  auto* run = app.add_subcommand("run", "Secure (or plaintext) inference");
  run->add_option("--model", ra.model, "Model JSON")->required();
  run->add_option("--input", ra.input, "Input .fxt or CSV row");
  run->add_option("--row", ra.row, "CSV row index (comments skipped)");
  run->add_option("--transport", ra.transport, "inproc|tcp");
  run->add_option("--role", ra.role, "Party 0 (input owner, listens) or 1 (connects)");
  run->add_option("--peer", ra.peer, "Party 0 address for role 1");
  run->add_option("--bind", ra.bind, "Listen address for role 0 (default $PI_BIND_ADDR)");
  run->add_option("--mode", ra.mode, "public|shared weights");
  run->add_option("--material", ra.material, "This party's dealer material file");
  run->add_option("--shared-dir", ra.shared_dir, "Directory with this party's weight shares");
  run->add_option("--seed", ra.seed, "Protocol seed");
  run->add_option("--dealer-seed", ra.dealer_seed, "Seed for locally generated material");
  run->add_option("--ring-bits", ra.ring_bits, "Override the model ring size");
  run->add_option("--frac-bits", ra.frac_bits, "Override the fractional bits");
  run->add_flag("--plaintext", ra.plaintext, "Fixed-point plaintext reference");
  run->add_option("--logits", ra.logits_out, "Write logits (.fxt or CSV)");
  run->add_option("--transcript", ra.transcript_out, "Write the transcript CSV");
  run->add_option("--report", ra.report_out, "Write a per-layer JSON report");
  run->add_flag("--timings", ra.timings, "Include wall-clock columns");
  run->add_option("--timeout-ms", ra.timeout_ms, "Connect and receive timeout");

  PredictArgs pa;
  auto* predict = app.add_subcommand("predict", "Predict 2PC latency of a model");
  predict->add_option("--model", pa.model, "Model JSON")->required();
  predict->add_option("--hw", pa.hw, "Hardware profile TOML");
  predict->add_option("--variant", pa.variant, "as-is|polynomial|baseline");
  predict->add_flag("--per-layer", pa.per_layer, "Include per-layer rows");
  predict->add_option("--format", pa.format, "json|csv");
  predict->add_option("--out", pa.out_path, "Also write the report here");

  BenchArgs ba;
  auto* bench = app.add_subcommand("bench", "Run one secure operator and report its traffic");
  bench->add_option("--op", ba.op, "relu|drelu|maxpool|avgpool|x2act|conv");
  bench->add_option("--fi", ba.fi, "Input spatial size");
  bench->add_option("--ic", ba.ic, "Input channels");
  bench->add_option("--oc", ba.oc, "Output channels (conv)");
  bench->add_option("--kernel", ba.kernel, "Kernel size (conv)");
  bench->add_option("--ring-bits", ba.ring_bits, "Ring size");
  bench->add_option("--frac-bits", ba.frac_bits, "Fractional bits");
  bench->add_option("--seed", ba.seed, "Seed");
  bench->add_option("--hw", ba.hw, "Hardware profile TOML");
  bench->add_option("--transcript", ba.transcript_out, "Write the transcript CSV");
  bench->add_option("--report", ba.report_out, "Write the JSON report");
  bench->add_flag("--timings", ba.timings, "Include wall-clock time");

  SearchArgs sa;
  auto* search = app.add_subcommand("search", "Latency-aware architecture search");
  search->add_option("--backbone", sa.backbone, "toy|mini-vgg|supernet.json");
  search->add_option("--lambda", sa.lambda, "Latency penalty");
  search->add_option("--epochs", sa.epochs, "Search epochs");
  search->add_option("--batch", sa.batch, "Minibatch size");
  search->add_option("--seed", sa.seed, "Seed");
  search->add_option("--hw", sa.hw, "Hardware profile TOML");
  search->add_option("--out", sa.out_path, "Architecture JSON");
  search->add_option("--log", sa.log_path, "Search log CSV");
  search->add_option("--data", sa.data, "Dataset CSV (label,values...)");
  search->add_option("--classes", sa.classes, "Number of classes");
  search->add_option("--samples", sa.samples, "Synthetic dataset size");
  search->add_option("--noise", sa.noise, "Synthetic pixel noise");
  search->add_option("--entropy-stop", sa.entropy_stop, "Stop below this mean theta entropy");
  search->add_option("--retrain-epochs", sa.retrain_epochs, "Epochs to retrain the derived arch");
  search->add_option("--export", sa.export_path, "Write the derived model JSON");
  search->add_flag("--separate-weights", sa.separate, "Per-candidate weights");

  DemoArgs dm;
  auto* demo = app.add_subcommand("demo", "Regenerate the bundled demo directory");
  demo->add_option("--out-dir", dm.out_dir, "Output directory");
  demo->add_option("--seed", dm.seed, "Seed");
  demo->add_option("--epochs", dm.epochs, "Training epochs");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "pi: " << e.what() << '\n';
    return 2;
  }
  try {
    if (*dealer) CmdDealer(da, out);
    if (*run) CmdRun(ra, out);
    if (*predict) CmdPredict(pa, out);
    if (*bench) CmdBench(ba, out);
    if (*search) CmdSearch(sa, out);
    if (*demo) CmdDemo(dm, out);
  } catch (const std::exception& e) {
    err << "pi: error: " << e.what() << '\n';
    return ExitCodeFor(e);
  }
  return 0;
}

}  // namespace pinas::cli
