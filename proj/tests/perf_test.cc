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
#include <random>

#include <gtest/gtest.h>

#include "pinas/common/errors.h"
#include "pinas/ot/compare.h"
#include "pinas/perf/hw_config.h"
#include "pinas/perf/latency_table.h"
#include "test_util.h"

namespace pinas {
namespace {

using testing::TwoParty;

HwProfile Profile(double pp, double freq, double bw, double tbc) {
  HwProfile h;
  h.pp = pp;
  h.freq_hz = freq;
  h.rt_bw_bytes_per_s = bw;
  h.t_bc_s = tbc;
  return h;
}

OpGeometry Geo(int64_t fi, int64_t ic) {
  OpGeometry g;
  g.fi = fi;
  g.ic = ic;
  return g;
}

void ExpectRel(double got, double want) {
  EXPECT_LE(std::abs(got - want), 1e-12 * std::abs(want)) << got << " vs " << want;
}

TEST(PerfGoldenTest, HandDerivedValues) {
  const HwProfile h = Profile(1, 2e8, 1e9, 0);
  // 32 * 17 * 2^2 * 1 / (1 * 2e8)
  ExpectRel(ComputeOtFlowCosts(Geo(2, 1), h).cmp2, 1.088e-5);
  // 512 * 4 bits over 8e9 bit/s
  ExpectRel(ComputeOtFlowCosts(Geo(2, 1), h).comm2, 2.56e-7);
  // 2 * 4 / 2e8
  ExpectRel(LatAvgPool(Geo(2, 1), h), 4e-8);
}

TEST(PerfGoldenTest, ComparisonFlowTerms) {
  const HwProfile h = Profile(4, 2e8, 1e9, 50e-6);
  const OpGeometry g = Geo(8, 3);
  const double n = 8 * 8 * 3, ops = 4 * 2e8, bw = 8e9, tbc = 50e-6;
  const OtFlowCosts c = ComputeOtFlowCosts(g, h);
  ExpectRel(c.cmp2, 32 * 17 * n / ops);
  ExpectRel(c.cmp3, 32 * 81 * n / ops);
  ExpectRel(c.cmp4, 2049 * n / ops);
  ExpectRel(c.comm1, tbc + 32 / bw);
  ExpectRel(c.comm2, tbc + 512 * n / bw);
  ExpectRel(c.comm3, tbc + 2048 * n / bw);
  ExpectRel(c.comm4, tbc + 32 * n / bw);
  const double relu = c.cmp2 + c.cmp3 + c.cmp4 + c.comm1 + c.comm2 + c.comm3 + c.comm4;
  ExpectRel(LatRelu(g, h), relu);
  ExpectRel(LatMaxPool(g, h), relu + 3 * tbc);
  ExpectRel(LatX2Act(g, h), 4 * n / ops + 2 * (tbc + 32 * n / bw));
}

TEST(PerfGoldenTest, ConvAndFc) {
  const HwProfile h = Profile(4, 2e8, 1e9, 50e-6);
  OpGeometry g = Geo(8, 3);
  g.oc = 5;
  g.kernel = 3;
  g.padding = 1;
  const double o = 8, macs = 5 * 3 * 9 * o * o, ops = 8e8, bw = 8e9, tbc = 50e-6;
  const double words = 3 * 9 * o * o + 5 * 3 * 9;
  ExpectRel(LatConv(g, h), macs / ops + 2 * (tbc + 32 * words / bw));
  ExpectRel(LatFc(10, 4, h), 40 / ops + 2 * (tbc + 32 * (10 + 40) / bw));
}

TEST(PerfPropertyTest, MaxPoolGapIsThreeBaseLatencies) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0, 1);
  for (int i = 0; i < 100; ++i) {
    const HwProfile h = Profile(1 + std::floor(u(rng) * 64), 1e7 + u(rng) * 1e9,
                                1e6 + u(rng) * 1e10, u(rng) * 1e-3);
    const OpGeometry g = Geo(1 + int64_t(u(rng) * 64), 1 + int64_t(u(rng) * 256));
    const double gap = LatMaxPool(g, h) - LatRelu(g, h);
    EXPECT_NEAR(gap, 3 * h.t_bc_s, 1e-12 * LatMaxPool(g, h) + 1e-18);
  }
}

TEST(PerfPropertyTest, MonotoneInGeometry) {
  std::mt19937_64 rng(12);
  std::uniform_int_distribution<int64_t> fi(1, 64), ic(1, 128), step(1, 8);
  const HwProfile h;
  for (int i = 0; i < 1000; ++i) {
    OpGeometry a = Geo(fi(rng), ic(rng));
    a.oc = ic(rng);
    a.kernel = 3;
    a.padding = 1;
    OpGeometry b = a;
    if (i % 2) {
      b.fi += step(rng);
    } else {
      b.ic += step(rng);
    }
    EXPECT_LT(LatRelu(a, h), LatRelu(b, h));
    EXPECT_LT(LatMaxPool(a, h), LatMaxPool(b, h));
    EXPECT_LT(LatX2Act(a, h), LatX2Act(b, h));
    EXPECT_LT(LatAvgPool(a, h), LatAvgPool(b, h));
    EXPECT_LT(LatConv(a, h), LatConv(b, h));
  }
}

TEST(PerfPropertyTest, PolynomialCheaperThanComparison) {
  const HwProfile h;
  const OpGeometry g = Geo(32, 64);
  EXPECT_LT(LatX2Act(g, h), LatRelu(g, h));
  EXPECT_LT(LatAvgPool(g, h), LatMaxPool(g, h));
}

TEST(PerfPropertyTest, InvalidProfile) {
  EXPECT_THROW(Profile(0, 2e8, 1e9, 0).Validate(), ConfigError);
  EXPECT_THROW(Profile(1, -1, 1e9, 0).Validate(), ConfigError);
  EXPECT_THROW(Profile(1, 2e8, 0, 0).Validate(), ConfigError);
  EXPECT_THROW(Profile(1, 2e8, 1e9, -1).Validate(), ConfigError);
}

// The measured comparison traffic equals the payload model bit for bit.
TEST(PerfAccountingTest, DreluTranscriptMatchesPayloadModel) {
  const RingConfig cfg{32, 16};
  for (int64_t fi : {2, 8, 16}) {
    for (int64_t ic : {1, 4}) {
      const OpGeometry g = Geo(fi, ic);
      Prg rng(uint64_t(fi * 10 + ic));
      std::vector<int64_t> xs(size_t(g.elements()));
      for (auto& x : xs) x = int64_t(rng() % 2001) - 1000;
      auto [s0, s1] = Shr(FixedTensor::FromSigned({ic, fi, fi}, xs, cfg), rng);
      TwoParty tp;
      tp.Run([&](Channel& ch) { Party p(ch, 1); return Drelu(p, s0); },
             [&](Channel& ch) { Party p(ch, 1); return Drelu(p, s1); });
      const Transcript& t0 = tp.ch0->transcript();
      const Transcript& t1 = tp.ch1->transcript();
      ASSERT_EQ(t0.rounds(), 4);
      uint64_t flow_bits = 0;
      for (int r = 1; r < 4; ++r) flow_bits += 8 * t0.payload_bytes_in_round(r, Direction::kSend);
      for (int r = 1; r < 4; ++r) flow_bits += 8 * t1.payload_bytes_in_round(r, Direction::kSend);
      EXPECT_EQ(flow_bits, Comm2PayloadBits(g) + Comm3PayloadBits(g) + Comm4PayloadBits(g))
          << "fi=" << fi << " ic=" << ic;
      const uint64_t all_bits = 8 * (t0.payload_bytes(Direction::kSend) +
                                     t1.payload_bytes(Direction::kSend));
      EXPECT_EQ(all_bits, Comm1PayloadBits() + flow_bits);
      EXPECT_EQ(t0.payload_bytes(Direction::kSend), t1.payload_bytes(Direction::kRecv));
    }
  }
}

TEST(LatencyTableTest, ToySupernet) {
  const SupernetSpec s = SupernetSpec::Toy();
  const HwProfile h;
  const LatencyTable t = BuildLatencyTable(s, h);
  ASSERT_EQ(t.size(), 6u);
  ASSERT_EQ(t.layers(), 2u);
  // conv1 output: 8x8x4; pool input is the same geometry.
  const OpGeometry g1 = Geo(8, 4);
  EXPECT_DOUBLE_EQ(t.Get(0, 0), LatRelu(g1, h) + LatMaxPool(g1, h));
  EXPECT_DOUBLE_EQ(t.Get(0, 3), LatX2Act(g1, h) + LatAvgPool(g1, h));
  const OpGeometry g2 = Geo(4, 8);
  EXPECT_DOUBLE_EQ(t.Get(1, 0), LatRelu(g2, h));
  EXPECT_DOUBLE_EQ(t.Get(1, 1), LatX2Act(g2, h));
  for (size_t l = 0; l < 2; ++l) {
    const auto row = t.Row(l);
    const double mn = *std::min_element(row.begin(), row.end());
    EXPECT_EQ(mn, row.back()) << "all-polynomial candidate is the cheapest";
  }
}

TEST(LatencyTableTest, EmptySupernet) {
  SupernetSpec s = SupernetSpec::Toy();
  s.layers.clear();
  EXPECT_EQ(BuildLatencyTable(s, HwProfile{}).size(), 0u);
  EXPECT_EQ(ArchLatency(LatencyTable{}, {}), 0.0);
}

TEST(LatencyTableTest, ArchLatency) {
  const LatencyTable t({{1.0, 2.0, 3.0, 4.0}, {10.0, 20.0}});
  EXPECT_DOUBLE_EQ(ArchLatency(t, {{0, 0, 1, 0}, {0, 1}}), 23.0);
  EXPECT_DOUBLE_EQ(ArchLatency(t, {{0.25, 0.25, 0.25, 0.25}, {0.5, 0.5}}), 2.5 + 15.0);
  EXPECT_DOUBLE_EQ(ArchLatency(t, {{0.1, 0.2, 0.3, 0.4}, {0.9, 0.1}}),
                   0.1 + 0.4 + 0.9 + 1.6 + 9.0 + 2.0);
  EXPECT_THROW(ArchLatency(t, {{1, 0, 0, 0}}), ShapeError);
  EXPECT_THROW(ArchLatency(t, {{1, 0, 0}, {1, 0}}), ShapeError);
  EXPECT_THROW(ArchLatency(t, {{0.5, 0, 0, 0}, {1, 0}}), ConfigError);
}

TEST(LatencyTableTest, CountsReads) {
  const LatencyTable t({{1.0, 2.0}});
  EXPECT_EQ(t.reads(), 0u);
  t.Get(0, 1);
  t.Row(0);
  EXPECT_EQ(t.reads(), 3u);
}

TEST(HwConfigTest, ParsesProfile) {
  const HwProfile h = ParseHwProfile(R"(# two servers
[hw]
id = "fpga-pair"
pp = 8
freq_hz = 2.0e8   # 200 MHz
rt_bw_bytes_per_s = 1e9
t_bc_s = 0.0001
[notes]
anything = "ignored"
)");
  EXPECT_EQ(h.id, "fpga-pair");
  EXPECT_EQ(h.pp, 8);
  EXPECT_EQ(h.freq_hz, 2e8);
  EXPECT_EQ(h.rt_bw_bytes_per_s, 1e9);
  EXPECT_EQ(h.t_bc_s, 1e-4);
}

TEST(HwConfigTest, RoundTrip) {
  const HwProfile h = Profile(3, 1.5e8, 2.5e9, 7e-5);
  const HwProfile back = ParseHwProfile(HwProfileToToml(h));
  EXPECT_EQ(back.pp, h.pp);
  EXPECT_EQ(back.freq_hz, h.freq_hz);
  EXPECT_EQ(back.rt_bw_bytes_per_s, h.rt_bw_bytes_per_s);
  EXPECT_EQ(back.t_bc_s, h.t_bc_s);
}

TEST(HwConfigTest, Errors) {
  EXPECT_THROW(ParseHwProfile("bogus = 1\n"), ConfigError);
  EXPECT_THROW(ParseHwProfile("pp = fast\n"), ConfigError);
  EXPECT_THROW(ParseHwProfile("pp = 1\npp = 2\n"), ConfigError);
  EXPECT_THROW(ParseHwProfile("pp = 0\n"), ConfigError);
  EXPECT_THROW(ParseHwProfile("no equals sign\n"), ConfigError);
  EXPECT_THROW(LoadHwProfile("/nonexistent/hw.toml"), IoError);
}

}  // namespace
}  // namespace pinas
