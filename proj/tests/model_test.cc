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

#include <cmath>
#include <filesystem>
#include <map>
#include <thread>

#include <gtest/gtest.h>

#include "pinas/common/errors.h"
#include "pinas/nas/export.h"
#include "pinas/nas/search.h"
#include "pinas/ops/inference.h"
#include "pinas/ops/plaintext.h"
#include "pinas/perf/perf_model.h"
#include "test_util.h"

namespace pinas {
namespace {

using testing::TwoParty;

struct Trained {
  Supernet net{SupernetSpec::Toy()};
  TensorSet w;
  Dataset test;
};

const Trained& TrainedToy(const Arch& arch) {
  static std::map<Arch, Trained> cache;
  auto it = cache.find(arch);
  if (it != cache.end()) return it->second;
  Trained& t = cache[arch];
  Prg rng(21);
  TrainConfig cfg;
  cfg.epochs = 4;
  t.w = TrainFixed(t.net, t.net.InitWeights(rng), arch, MakePatterns(256, 4, 0.5, 22), cfg);
  t.test = MakePatterns(20, 4, 0.5, 23);
  return t;
}

std::vector<double> Sample(const Dataset& d, int64_t i) {
  const int64_t s = d.sample_size();
  return {d.x.begin() + i * s, d.x.begin() + (i + 1) * s};
}

TEST(ExportTest, MatchesSupernetForward) {
  for (const Arch& arch : {Arch{0, 0}, Arch{3, 1}, Arch{1, 0}}) {
    const Trained& t = TrainedToy(arch);
    const ModelSpec m = ExportModel(t.net, t.w, arch);
    ASSERT_EQ(m.layers.size(), 6u);
    const auto logits = t.net.Forward(t.w.Leaves(), t.net.FixedTheta(arch), t.test.Input());
    for (int64_t i = 0; i < t.test.size(); ++i) {
      const auto f = FloatForward(m, Sample(t.test, i));
      for (size_t k = 0; k < 4; ++k) {
        EXPECT_NEAR(f[k], logits.value()[size_t(i) * 4 + k], 2e-3) << "sample " << i;
      }
    }
  }
}

TEST(ExportTest, LayerKinds) {
  const Trained& t = TrainedToy({3, 1});
  const ModelSpec m = ExportModel(t.net, t.w, {3, 1});
  EXPECT_EQ(m.layers[1].kind, LayerKind::kX2Act);
  EXPECT_EQ(m.layers[1].x2act.n_x, 9.0);
  EXPECT_EQ(m.layers[2].kind, LayerKind::kAvgPool);
  EXPECT_EQ(m.layers[4].kind, LayerKind::kX2Act);
  EXPECT_EQ(m.layers[4].x2act.n_x, 36.0);
  EXPECT_EQ(m.layers[5].kind, LayerKind::kFc);
  EXPECT_THROW(ExportModel(t.net, t.w, {4, 0}), ConfigError);
  EXPECT_THROW(ExportModel(t.net, t.w, {0}), ShapeError);
}

TEST(ModelIoTest, JsonRoundTrip) {
  const Trained& t = TrainedToy({3, 1});
  const ModelSpec m = ExportModel(t.net, t.w, {3, 1}, {64, 16}, "roundtrip");
  const auto dir = std::filesystem::path(::testing::TempDir()) / "pinas_model_io";
  std::filesystem::create_directories(dir);
  const std::string path = (dir / "model.json").string();
  SaveModel(path, m);
  const ModelSpec back = LoadModel(path);
  EXPECT_EQ(back.name, "roundtrip");
  ASSERT_EQ(back.layers.size(), m.layers.size());
  for (size_t i = 0; i < m.layers.size(); ++i) {
    EXPECT_EQ(back.layers[i].kind, m.layers[i].kind);
    EXPECT_EQ(back.layers[i].weight.ToSigned(), m.layers[i].weight.ToSigned());
    EXPECT_EQ(back.layers[i].x2act.w1, m.layers[i].x2act.w1);
  }
  EXPECT_EQ(ModelDigest(back), ModelDigest(m));
  EXPECT_THROW(LoadModel((dir / "missing.json").string()), IoError);
}

TEST(ModelVariantTest, PolynomialAndBaseline) {
  const Trained& t = TrainedToy({0, 0});
  const ModelSpec base = ExportModel(t.net, t.w, {0, 0});
  const ModelSpec poly = PolynomialVariant(base);
  EXPECT_EQ(poly.layers[1].kind, LayerKind::kX2Act);
  EXPECT_EQ(poly.layers[2].kind, LayerKind::kAvgPool);
  EXPECT_EQ(poly.layers[1].x2act.n_x, 9.0);
  const ModelSpec again = BaselineVariant(poly);
  for (size_t i = 0; i < base.layers.size(); ++i) {
    EXPECT_EQ(again.layers[i].kind, base.layers[i].kind);
  }
  EXPECT_NE(ModelDigest(base), ModelDigest(poly));
}

TEST(ModelLatencyTest, AdditiveAndPolynomialFaster) {
  const Trained& t = TrainedToy({0, 0});
  const ModelSpec base = ExportModel(t.net, t.w, {0, 0});
  const HwProfile h;
  const auto layers = ModelLatency(base, h);
  ASSERT_EQ(layers.size(), base.layers.size());
  double sum = 0;
  for (const auto& l : layers) sum += l.seconds;
  EXPECT_DOUBLE_EQ(TotalLatency(layers), sum);
  const double poly = TotalLatency(ModelLatency(PolynomialVariant(base), h));
  EXPECT_GT(sum / poly, 5.0);
}

TEST(SecureInferenceTest, MatchesPlaintextFixedPoint) {
  for (const Arch& arch : {Arch{0, 0}, Arch{3, 1}}) {
    const Trained& t = TrainedToy(arch);
    const ModelSpec m = ExportModel(t.net, t.w, arch);
    for (int64_t i = 0; i < 3; ++i) {
      const FixedTensor x = FixedTensor::FromReals(m.input_shape, Sample(t.test, i), m.ring);
      const InProcResult r = RunInProc(m, x, 100 + uint64_t(i), 200 + uint64_t(i));
      const FixedTensor plain = PlainForward(m, x);
      EXPECT_EQ(ArgMax(r.logits), ArgMax(plain));
      const auto a = r.logits.ToReals(), b = plain.ToReals();
      for (size_t k = 0; k < a.size(); ++k) EXPECT_NEAR(a[k], b[k], 1e-2);
      EXPECT_EQ(r.layers.size(), m.layers.size());
    }
  }
}

TEST(SecureInferenceTest, SharedWeightsMode) {
  const Trained& t = TrainedToy({3, 1});
  const ModelSpec m = ExportModel(t.net, t.w, {3, 1});
  const FixedTensor x = FixedTensor::FromReals(m.input_shape, Sample(t.test, 0), m.ring);
  RunOptions opt;
  opt.mode = WeightsMode::kShared;
  const InProcResult r = RunInProc(m, x, 5, 6, opt);
  EXPECT_EQ(ArgMax(r.logits), ArgMax(PlainForward(m, x)));
}

TEST(HandshakeTest, MatchAndMismatch) {
  SessionInfo a{{64, 16}, 42, 0};
  {
    TwoParty tp;
    EXPECT_NO_THROW(tp.Run([&](Channel& ch) { Handshake(ch, a); return 0; },
                           [&](Channel& ch) { Handshake(ch, a); return 0; }));
    EXPECT_EQ(tp.ch0->transcript().total_payload_bytes(), 0u);
  }
  for (SessionInfo b : {SessionInfo{{32, 16}, 42, 0}, SessionInfo{{64, 12}, 42, 0},
                        SessionInfo{{64, 16}, 43, 0}, SessionInfo{{64, 16}, 42, 1}}) {
    TwoParty tp;
    EXPECT_THROW(tp.Run([&](Channel& ch) { Handshake(ch, a); return 0; },
                        [&](Channel& ch) { Handshake(ch, b); return 0; }),
                 ConfigError);
  }
}

}  // namespace
}  // namespace pinas
