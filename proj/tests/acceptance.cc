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

// Acceptance suite: prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>

#include "pinas/nas/autodiff.h"
#include "pinas/nas/dataset.h"
#include "pinas/nas/search.h"
#include "pinas/ops/inference.h"
#include "pinas/ops/plaintext.h"
#include "pinas/ops/secure_ops.h"
#include "pinas/ot/compare.h"
#include "pinas/perf/latency_table.h"
#include "pinas/sharing/protocols.h"
#include "test_util.h"

namespace pinas {
namespace {

using testing::TwoParty;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double Seconds(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string Fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// ---- 1: share round trip ----

Outcome ShareRoundTrip() {
  const auto t0 = std::chrono::steady_clock::now();
  Prg rng(101);
  const RingConfig k8{8, 0};
  std::vector<RingElem> all(256);
  for (int i = 0; i < 256; ++i) all[static_cast<size_t>(i)] = RingElem(i);
  const FixedTensor x8({256}, all, k8);
  auto [a0, a1] = Shr(x8, rng);
  const FixedTensor r8 = Rec(a0, a1);
  int failures = 0;
  for (int i = 0; i < 256; ++i) failures += r8[i] != RingElem(i);

  const RingConfig k32{32, 16};
  FixedTensor x32({100000}, k32);
  for (auto& v : x32.data()) v = rng() & 0xFFFFFFFFu;
  auto [b0, b1] = Shr(x32, rng);
  const FixedTensor r32 = Rec(b0, b1);
  for (int64_t i = 0; i < x32.size(); ++i) failures += r32[i] != x32[i];
  const double s = Seconds(t0);
  return {failures == 0 && s < 1.0, Fmt("%d failures over 256 + 100000 cases, %.3f s", failures, s)};
}

// ---- 2: Beaver products ----

Outcome BeaverProducts() {
  const auto t0 = std::chrono::steady_clock::now();
  const RingConfig cfg{32, 0};
  const uint64_t mask = 0xFFFFFFFFu;
  Prg rng(102);
  std::uniform_int_distribution<int64_t> dim(1, 8), len(1, 64);
  std::vector<MaterialRequest> req;
  std::vector<FixedTensor> xs, ys, sq;
  for (int i = 0; i < 1000; ++i) {
    const int64_t m = dim(rng), k = dim(rng), n = dim(rng);
    FixedTensor x({m, k}, cfg), y({k, n}, cfg);
    for (auto& v : x.data()) v = rng() & mask;
    for (auto& v : y.data()) v = rng() & mask;
    xs.push_back(x);
    ys.push_back(y);
    req.push_back(MaterialRequest::Triple(TripleShape::MatMul(m, k, n)));
  }
  for (int i = 0; i < 1000; ++i) {
    FixedTensor z({len(rng)}, cfg);
    for (auto& v : z.data()) v = rng() & mask;
    sq.push_back(z);
    req.push_back(MaterialRequest::Pair(z.size()));
  }
  auto [m0, m1] = DealerIssue(req, cfg, rng);
  std::vector<Share> x0, x1, y0, y1, z0, z1;
  for (int i = 0; i < 1000; ++i) {
    auto [a, b] = Shr(xs[i], rng);
    auto [c, d] = Shr(ys[i], rng);
    auto [e, f] = Shr(sq[i], rng);
    x0.push_back(a), x1.push_back(b), y0.push_back(c), y1.push_back(d);
    z0.push_back(e), z1.push_back(f);
  }
  auto side = [](MaterialStore& m, std::vector<Share>& x, std::vector<Share>& y,
                 std::vector<Share>& z) {
    return [&](Channel& ch) {
      Party p(ch, 7, &m);
      std::vector<Share> out;
      for (size_t i = 0; i < x.size(); ++i) out.push_back(BeaverMul(p, x[i], y[i], ProductKind::kMatMul));
      for (size_t i = 0; i < z.size(); ++i) out.push_back(BeaverSquare(p, z[i]));
      return out;
    };
  };
  TwoParty tp;
  auto [r0, r1] = tp.Run(side(m0, x0, y0, z0), side(m1, x1, y1, z1));
  int mul_fail = 0, sq_fail = 0;
  for (size_t i = 0; i < 1000; ++i) {
    const FixedTensor r = Rec(r0[i], r1[i]);
    const int64_t m = xs[i].shape()[0], k = xs[i].shape()[1], n = ys[i].shape()[1];
    for (int64_t a = 0; a < m; ++a) {
      for (int64_t b = 0; b < n; ++b) {
        uint64_t acc = 0;
        for (int64_t t = 0; t < k; ++t) acc += xs[i][a * k + t] * ys[i][t * n + b];
        mul_fail += r[a * n + b] != (acc & mask);
      }
    }
    const FixedTensor s = Rec(r0[1000 + i], r1[1000 + i]);
    for (int64_t j = 0; j < sq[i].size(); ++j) sq_fail += s[j] != ((sq[i][j] * sq[i][j]) & mask);
  }
  const double s = Seconds(t0);
  return {mul_fail == 0 && sq_fail == 0 && s < 5.0,
          Fmt("%d matmul and %d square mismatches over 1000 + 1000 cases, %.2f s", mul_fail,
              sq_fail, s)};
}

// ---- 3: comparison ----

int DreluFailures(const std::vector<int64_t>& xs, RingConfig cfg, uint64_t seed) {
  Prg rng(seed);
  auto [s0, s1] = Shr(FixedTensor::FromSigned({int64_t(xs.size())}, xs, cfg), rng);
  TwoParty tp;
  auto [r0, r1] = tp.Run([&](Channel& ch) { Party p(ch, seed); return Drelu(p, s0); },
                         [&](Channel& ch) { Party p(ch, seed); return Drelu(p, s1); });
  const auto got = Rec(r0, r1).ToSigned();
  int failures = 0;
  for (size_t i = 0; i < xs.size(); ++i) failures += got[i] != (xs[i] >= 0 ? 1 : 0);
  return failures;
}

Outcome Comparison() {
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<int64_t> all(65536);
  for (int i = 0; i < 65536; ++i) all[static_cast<size_t>(i)] = i - 32768;
  int failures = DreluFailures(all, {16, 0}, 103);
  Prg rng(104);
  std::vector<int64_t> xs(10000);
  for (auto& v : xs) v = int64_t(int32_t(uint32_t(rng())));
  failures += DreluFailures(xs, {32, 0}, 105);
  const double s = Seconds(t0);
  return {failures == 0 && s < 30.0,
          Fmt("%d failures over 65536 (k=16) + 10000 (k=32) cases, %.2f s", failures, s)};
}

// ---- 4: operator oracles ----

const RingConfig kCfg{64, 16};

int64_t S(RingElem v) { return kCfg.ToSigned(v); }

FixedTensor RandomReals(Shape s, double lo, double hi, Prg& rng) {
  std::uniform_real_distribution<double> d(lo, hi);
  std::vector<double> v(static_cast<size_t>(NumElements(s)));
  for (auto& e : v) e = d(rng);
  return FixedTensor::FromReals(std::move(s), v, kCfg);
}

template <class Op>
FixedTensor Secure(const LayerSpec& l, const FixedTensor& x, Op op, uint64_t seed) {
  Prg rng(seed);
  auto [m0, m1] = DealerIssue(PlanLayerMaterial(l, x.shape(), WeightsMode::kPublic), kCfg, rng);
  auto [x0, x1] = Shr(x, rng);
  TwoParty tp;
  auto [r0, r1] = tp.Run([&](Channel& ch) { Party p(ch, seed, &m0); return op(p, x0); },
                         [&](Channel& ch) { Party p(ch, seed, &m1); return op(p, x1); });
  return Rec(r0, r1);
}

// Worst |secure - exact| in ULPs for one operator over 100 random tensors.
struct OpResult {
  long double worst = 0;
  int violations = 0;
};

OpResult CheckRelu(Prg& rng) {
  OpResult r;
  const LayerSpec l = LayerSpec::Relu("r");
  for (int t = 0; t < 100; ++t) {
    const FixedTensor x = RandomReals({2, 6, 6}, -50, 50, rng);
    const FixedTensor y = Secure(l, x, [](Party& p, const Share& s) { return Relu2pc(p, s); }, t);
    for (int64_t i = 0; i < x.size(); ++i) {
      const long double d = std::fabs((long double)(S(y[i]) - std::max<int64_t>(S(x[i]), 0)));
      r.worst = std::max(r.worst, d);
      r.violations += d != 0;
    }
  }
  return r;
}

OpResult CheckMaxPool(Prg& rng) {
  OpResult r;
  const LayerSpec l = LayerSpec::MaxPool("mp", 2, 2);
  for (int t = 0; t < 100; ++t) {
    const FixedTensor x = RandomReals({2, 6, 6}, -50, 50, rng);
    const FixedTensor y =
        Secure(l, x, [&](Party& p, const Share& s) { return MaxPool2pc(p, s, l); }, t);
    for (int64_t c = 0; c < 2; ++c) {
      for (int64_t i = 0; i < 3; ++i) {
        for (int64_t j = 0; j < 3; ++j) {
          int64_t best = INT64_MIN;
          for (int a = 0; a < 2; ++a) {
            for (int b = 0; b < 2; ++b) best = std::max(best, S(x[(c * 6 + 2 * i + a) * 6 + 2 * j + b]));
          }
          const long double d = std::fabs((long double)(S(y[(c * 3 + i) * 3 + j]) - best));
          r.worst = std::max(r.worst, d);
          r.violations += d != 0;
        }
      }
    }
  }
  return r;
}

OpResult CheckConv(Prg& rng) {
  OpResult r;
  std::uniform_int_distribution<int64_t> ch(1, 3), kk(0, 1), st(1, 2);
  for (int t = 0; t < 100; ++t) {
    const int64_t C = ch(rng), O = ch(rng), K = kk(rng) ? 3 : 1, stride = st(rng), pad = K / 2;
    const int64_t H = 6, W = 6;
    const LayerSpec l = LayerSpec::Conv("c", RandomReals({O, C, K, K}, -1, 1, rng),
                                        RandomReals({O}, -1, 1, rng), stride, pad);
    const FixedTensor x = RandomReals({C, H, W}, -4, 4, rng);
    const FixedTensor y =
        Secure(l, x, [&](Party& p, const Share& s) { return Conv2pc(p, s, l); }, t);
    const int64_t OH = (H + 2 * pad - K) / stride + 1, OW = (W + 2 * pad - K) / stride + 1;
    const long double tol = C * K * K + 1;
    for (int64_t o = 0; o < O; ++o) {
      for (int64_t i = 0; i < OH; ++i) {
        for (int64_t j = 0; j < OW; ++j) {
          __int128 acc = 0;
          for (int64_t c = 0; c < C; ++c) {
            for (int64_t a = 0; a < K; ++a) {
              for (int64_t b = 0; b < K; ++b) {
                const int64_t yy = i * stride + a - pad, zz = j * stride + b - pad;
                if (yy < 0 || yy >= H || zz < 0 || zz >= W) continue;
                acc += __int128(S(l.weight[((o * C + c) * K + a) * K + b])) * S(x[(c * H + yy) * W + zz]);
              }
            }
          }
          const long double exact = (long double)acc / 65536.0L + S(l.bias[o]);
          const long double d = std::fabs((long double)S(y[(o * OH + i) * OW + j]) - exact);
          r.worst = std::max(r.worst, d / tol);
          r.violations += d > tol;
        }
      }
    }
  }
  return r;
}

OpResult CheckX2Act(Prg& rng) {
  OpResult r;
  std::uniform_real_distribution<double> u(-1, 1);
  std::uniform_int_distribution<int> nx(1, 27);
  for (int t = 0; t < 100; ++t) {
    const X2ActCoeffs c{u(rng), u(rng), u(rng), 1.0, double(nx(rng))};
    const LayerSpec l = LayerSpec::X2Act("x", c);
    const FixedTensor x = RandomReals({2, 6, 6}, -8, 8, rng);
    const FixedTensor y =
        Secure(l, x, [&](Party& p, const Share& s) { return X2Act2pc(p, s, l); }, t);
    const X2ActRing k = X2ActConstants(c, kCfg);
    for (int64_t i = 0; i < x.size(); ++i) {
      const long double xf = S(x[i]);
      const long double exact = (long double)S(k.a) * xf * xf / (65536.0L * 65536.0L) +
                                (long double)S(k.w2) * xf / 65536.0L + S(k.b);
      const long double d = std::fabs(S(y[i]) - exact);
      r.worst = std::max(r.worst, d);
      r.violations += d > 2;
    }
  }
  return r;
}

OpResult CheckAvgPool(Prg& rng) {
  OpResult r;
  const LayerSpec l = LayerSpec::AvgPool("ap", 2, 2);
  for (int t = 0; t < 100; ++t) {
    const FixedTensor x = RandomReals({2, 6, 6}, -20, 20, rng);
    const FixedTensor y = Secure(l, x, [&](Party&, const Share& s) { return AvgPool2pc(s, l); }, t);
    for (int64_t c = 0; c < 2; ++c) {
      for (int64_t i = 0; i < 3; ++i) {
        for (int64_t j = 0; j < 3; ++j) {
          long double sum = 0;
          for (int a = 0; a < 2; ++a) {
            for (int b = 0; b < 2; ++b) sum += S(x[(c * 6 + 2 * i + a) * 6 + 2 * j + b]);
          }
          const long double d = std::fabs(S(y[(c * 3 + i) * 3 + j]) - sum / 4);
          r.worst = std::max(r.worst, d);
          r.violations += d > 2;
        }
      }
    }
  }
  return r;
}

Outcome OperatorOracles() {
  const auto t0 = std::chrono::steady_clock::now();
  Prg rng(106);
  const OpResult relu = CheckRelu(rng), mp = CheckMaxPool(rng), conv = CheckConv(rng),
                 x2 = CheckX2Act(rng), ap = CheckAvgPool(rng);
  const double s = Seconds(t0);
  const int bad = relu.violations + mp.violations + conv.violations + x2.violations + ap.violations;
  return {bad == 0 && s < 60.0,
          Fmt("worst error relu %.0f, maxpool %.0f ulp, conv %.2f of bound, x2act %.2f ulp, "
              "avgpool %.2f ulp; %d violations, %.1f s",
              double(relu.worst), double(mp.worst), double(conv.worst), double(x2.worst),
              double(ap.worst), bad, s)};
}

// ---- 5: end to end ----

Outcome EndToEnd() {
  const auto t0 = std::chrono::steady_clock::now();
  const std::string dir = PINAS_DEMO_DIR;
  const ModelSpec m = LoadModel(dir + "/two_conv.json");
  const Dataset inputs = LoadImageCsv(dir + "/inputs.csv", m.input_shape, 4);
  const int64_t n = inputs.size(), d = inputs.sample_size();
  int agree = 0;
  for (int64_t i = 0; i < n; ++i) {
    const std::vector<double> v(inputs.x.begin() + i * d, inputs.x.begin() + (i + 1) * d);
    const FixedTensor x = FixedTensor::FromReals(m.input_shape, v, m.ring);
    const InProcResult r = RunInProc(m, x, 1000 + uint64_t(i), uint64_t(i));
    agree += ArgMax(r.logits) == ArgMax(PlainForward(m, x));
  }
  const double s = Seconds(t0);
  return {n == 100 && agree >= 99 && s < 120.0,
          Fmt("%d of %lld inputs agree on argmax, %.1f s", agree, (long long)n, s)};
}

// ---- 6: communication accounting ----

Outcome Accounting() {
  const RingConfig cfg{32, 16};
  int64_t worst = 0;
  std::string rows;
  for (int64_t fi : {2, 8, 16}) {
    for (int64_t ic : {1, 4}) {
      OpGeometry g;
      g.fi = fi;
      g.ic = ic;
      Prg rng(uint64_t(200 + fi * 10 + ic));
      std::vector<int64_t> xs(static_cast<size_t>(g.elements()));
      for (auto& x : xs) x = int64_t(rng() % 2001) - 1000;
      auto [s0, s1] = Shr(FixedTensor::FromSigned({ic, fi, fi}, xs, cfg), rng);
      TwoParty tp;
      tp.Run([&](Channel& ch) { Party p(ch, 1); return Drelu(p, s0); },
             [&](Channel& ch) { Party p(ch, 1); return Drelu(p, s1); });
      uint64_t bits = 0;
      for (int r = 1; r < 4; ++r) {
        bits += 8 * (tp.ch0->transcript().payload_bytes_in_round(r, Direction::kSend) +
                     tp.ch1->transcript().payload_bytes_in_round(r, Direction::kSend));
      }
      const uint64_t model = Comm2PayloadBits(g) + Comm3PayloadBits(g) + Comm4PayloadBits(g);
      worst = std::max(worst, std::abs(int64_t(bits) - int64_t(model)));
      rows += Fmt(" (%lld,%lld):%llu", (long long)fi, (long long)ic, (unsigned long long)bits);
    }
  }
  return {worst == 0, Fmt("max deviation %lld bits; measured bits per (FI,IC):%s", (long long)worst,
                          rows.c_str())};
}

// ---- 7: latency goldens and monotonicity ----

bool RelEq(double got, double want) { return std::abs(got - want) <= 1e-12 * std::abs(want); }

Outcome LatencyFormulas() {
  HwProfile h;
  h.pp = 1;
  h.freq_hz = 2e8;
  h.rt_bw_bytes_per_s = 1e9;
  h.t_bc_s = 0;
  OpGeometry g;
  g.fi = 2;
  g.ic = 1;
  const double cmp2 = ComputeOtFlowCosts(g, h).cmp2, avg = LatAvgPool(g, h);
  const bool golden = RelEq(cmp2, 1.088e-5) && RelEq(avg, 4e-8);

  std::mt19937_64 rng(107);
  std::uniform_int_distribution<int64_t> fi(1, 64), ic(1, 128), step(1, 8);
  const HwProfile d;
  int violations = 0;
  for (int i = 0; i < 1000; ++i) {
    OpGeometry a;
    a.fi = fi(rng);
    a.ic = ic(rng);
    a.oc = ic(rng);
    a.kernel = 3;
    a.padding = 1;
    OpGeometry b = a;
    (i % 2 ? b.fi : b.ic) += step(rng);
    violations += !(LatRelu(a, d) < LatRelu(b, d)) + !(LatMaxPool(a, d) < LatMaxPool(b, d)) +
                  !(LatX2Act(a, d) < LatX2Act(b, d)) + !(LatAvgPool(a, d) < LatAvgPool(b, d)) +
                  !(LatConv(a, d) < LatConv(b, d));
  }
  return {golden && violations == 0,
          Fmt("CMP_2 = %.6g s, AvgPool = %.6g s; %d monotonicity violations over 1000 geometries",
              cmp2, avg, violations)};
}

// ---- 8: MaxPool gap ----

Outcome MaxPoolGap() {
  std::mt19937_64 rng(108);
  std::uniform_real_distribution<double> u(0, 1);
  double worst = 0;
  for (int i = 0; i < 100; ++i) {
    HwProfile h;
    h.pp = 1 + std::floor(u(rng) * 64);
    h.freq_hz = 1e7 + u(rng) * 1e9;
    h.rt_bw_bytes_per_s = 1e6 + u(rng) * 1e10;
    h.t_bc_s = 1e-6 + u(rng) * 1e-3;
    OpGeometry g;
    g.fi = 1 + int64_t(u(rng) * 64);
    g.ic = 1 + int64_t(u(rng) * 256);
    const double gap = LatMaxPool(g, h) - LatRelu(g, h);
    worst = std::max(worst, std::abs(gap - 3 * h.t_bc_s) / LatMaxPool(g, h));
  }
  return {worst <= 1e-12, Fmt("max |gap - 3 T_bc| / Lat = %.2e over 100 profiles", worst)};
}

// ---- 9: gradients ----

std::vector<double> Normal(std::mt19937_64& rng, int64_t n) {
  std::normal_distribution<double> nd(0, 1);
  std::vector<double> v(static_cast<size_t>(n));
  for (auto& e : v) e = nd(rng);
  return v;
}

using Builder = std::function<ad::Var(const std::vector<ad::Var>&)>;

double MaxGradError(const std::vector<Shape>& shapes, const std::vector<std::vector<double>>& vals,
                    const Builder& f) {
  std::vector<ad::Var> leaves;
  for (size_t i = 0; i < shapes.size(); ++i) leaves.push_back(ad::Param(shapes[i], vals[i]));
  ad::Backward(f(leaves));
  const double h = 1e-5;
  double worst = 0;
  for (size_t i = 0; i < shapes.size(); ++i) {
    for (size_t j = 0; j < vals[i].size(); ++j) {
      auto eval = [&](double delta) {
        std::vector<ad::Var> ls;
        for (size_t k = 0; k < shapes.size(); ++k) {
          auto v = vals[k];
          if (k == i) v[j] += delta;
          ls.push_back(ad::Constant(shapes[k], v));
        }
        return f(ls).item();
      };
      const double fd = (eval(h) - eval(-h)) / (2 * h);
      const double bp = leaves[i].grad()[j];
      worst = std::max(worst, std::abs(fd - bp) / std::max(1e-3, std::abs(fd) + std::abs(bp)));
    }
  }
  return worst;
}

class ScalarProblem : public BilevelProblem {
 public:
  using Fn = std::function<ad::Var(const ad::Var&, const ad::Var&)>;
  ScalarProblem(Fn trn, Fn val) : trn_(std::move(trn)), val_(std::move(val)) {}
  LossGraph Build(const TensorSet& w, const TensorSet& a, Split split) override {
    LossGraph g;
    g.w = w.Leaves();
    g.alpha = a.Leaves();
    g.loss = (split == Split::kTrain ? trn_ : val_)(g.w[0], g.alpha[0]);
    return g;
  }

 private:
  Fn trn_, val_;
};

TensorSet Vec(std::vector<double> v) {
  TensorSet t;
  const int64_t n = int64_t(v.size());
  t.Append("v", {n}, std::move(v));
  return t;
}

ad::Var HalfSq(const ad::Var& w, const ad::Var& a) {
  return ad::Scale(ad::Sum(ad::Square(ad::Sub(w, a))), 0.5);
}

Outcome Gradients() {
  std::mt19937_64 rng(109);
  const std::vector<std::pair<std::vector<Shape>, Builder>> graphs = {
      {{{4, 5}, {6, 5}, {6}, {3, 6}, {3}},
       [](auto& v) {
         return ad::SoftmaxCrossEntropy(ad::Linear(ad::Relu(ad::Linear(v[0], v[1], v[2])), v[3], v[4]),
                                        {0, 2, 1, 2});
       }},
      {{{2, 2, 5, 5}, {3, 2, 3, 3}, {3}},
       [](auto& v) { return ad::Mean(ad::Square(ad::MaxPool2d(ad::Conv2d(v[0], v[1], v[2], 1, 1), 2, 2))); }},
      {{{6}, {1}, {1}, {1}},
       [](auto& v) { return ad::Mean(ad::Square(ad::X2Act(v[0], v[1], v[2], v[3], 0.7))); }},
      {{{1, 3, 6, 6}}, [](auto& v) { return ad::Sum(ad::Square(ad::AvgPool2d(v[0], 3, 1))); }},
      {{{3}, {2, 3}, {2, 3}, {2, 3}},
       [](auto& v) { return ad::Sum(ad::Square(ad::WeightedSum({v[1], v[2], v[3]}, ad::Softmax(v[0])))); }},
      {{{4}, {4}},
       [](auto& v) {
         const ad::Var dot = ad::Reshape(ad::MatMul(ad::Reshape(v[1], {1, 4}), ad::Reshape(v[0], {4, 1})), {1});
         return ad::Sum(ad::Square(ad::ScaleBy(ad::Softmax(v[0]), dot)));
       }},
  };
  double ad_err = 0;
  for (const auto& [shapes, f] : graphs) {
    for (int trial = 0; trial < 5; ++trial) {
      std::vector<std::vector<double>> vals;
      for (const auto& s : shapes) vals.push_back(Normal(rng, NumElements(s)));
      ad_err = std::max(ad_err, MaxGradError(shapes, vals, f));
    }
  }

  auto trn = [](const ad::Var& w, const ad::Var& a) {
    return ad::Add(HalfSq(w, a), ad::Scale(ad::Sum(ad::Mul(ad::Square(w), ad::Square(a))), 0.25));
  };
  auto val = [](const ad::Var& w, const ad::Var& a) {
    return ad::Add(HalfSq(w, ad::Scale(a, 2)), ad::Scale(ad::Sum(ad::Square(ad::Square(w))), 0.1));
  };
  ScalarProblem p(trn, val);
  const double xi = 0.3;
  auto composed = [&](double w, double a) {
    const double wp = w - xi * ((w - a) + 0.5 * w * a * a);
    return 0.5 * (wp - 2 * a) * (wp - 2 * a) + 0.1 * wp * wp * wp * wp;
  };
  double darts_err = 0;
  for (auto [w0, a0] : {std::pair{0.8, -0.4}, {1.2, 0.9}, {-0.6, 0.3}}) {
    const AlphaGradient g = ComputeAlphaGradient(p, Vec({w0}), Vec({a0}), xi, 1e-2, nullptr);
    const double h = 1e-5;
    const double fd = (composed(w0, a0 + h) - composed(w0, a0 - h)) / (2 * h);
    darts_err = std::max(darts_err, std::abs(g.delta.values[0][0] - fd) / std::abs(fd));
  }

  ScalarProblem q(HalfSq, HalfSq);
  const TensorSet w = Vec({1.5, -0.5, 2.0}), a = Vec({0.25, 0.75, -1.0});
  double hess_err = 0;
  for (double eps_scale : {1e-1, 1e-2, 1e-3}) {
    const AlphaGradient g = ComputeAlphaGradient(q, w, a, 0.1, eps_scale, nullptr);
    for (size_t i = 0; i < 3; ++i) {
      const double v = g.w_prime.values[0][i] - a.values[0][i];
      const double hv = (g.first_order.values[0][i] - g.delta.values[0][i]) / 0.1;
      hess_err = std::max(hess_err, std::abs(hv + v) / std::abs(v));
    }
  }
  return {ad_err < 1e-4 && darts_err < 1e-3 && hess_err < 1e-9,
          Fmt("autodiff max rel err %.2e, alpha gradient vs finite difference %.2e, "
              "Hessian term rel err %.2e",
              ad_err, darts_err, hess_err)};
}

// ---- 10: search behaviour ----

Outcome SearchBehaviour() {
  const Supernet net(SupernetSpec::Toy(4));
  const LatencyTable table = BuildLatencyTable(net.spec(), HwProfile{});
  Arch cheapest;
  double cheapest_lat = INFINITY;
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 2; ++b) {
      const double l = DiscreteLatency(table, {a, b});
      if (l < cheapest_lat) cheapest_lat = l, cheapest = {a, b};
    }
  }
  const double lambdas[3] = {0, 30, 1000};
  int acc_ok = 0, cheap_ok = 0, mono_ok = 0;
  double slowest = 0;
  std::string rows;
  for (uint64_t seed = 1; seed <= 5; ++seed) {
    const Dataset all = MakePatterns(1536, 4, 0.5, seed);
    auto [trn, rest] = SplitDataset(all, 1.0 / 3.0, seed);
    auto [val, test] = SplitDataset(rest, 0.5, seed);
    TrainConfig tc;
    tc.seed = seed;
    double best = 0;
    for (int a = 0; a < 4; ++a) {
      for (int b = 0; b < 2; ++b) {
        Prg r(seed);
        const TensorSet w = TrainFixed(net, net.InitWeights(r), {a, b}, trn, tc);
        best = std::max(best, Accuracy(net, w, {a, b}, test));
      }
    }
    double acc0 = 0, lat[3];
    Arch big;
    for (int i = 0; i < 3; ++i) {
      const auto t0 = std::chrono::steady_clock::now();
      SearchConfig sc;
      sc.lambda = lambdas[i];
      sc.seed = seed;
      const SearchResult res = RunSearch(net, trn, val, table, sc);
      slowest = std::max(slowest, Seconds(t0));
      lat[i] = DiscreteLatency(table, res.arch);
      if (i == 0) {
        Prg r(seed);
        const TensorSet w = TrainFixed(net, net.InitWeights(r), res.arch, trn, tc);
        acc0 = Accuracy(net, w, res.arch, test);
      }
      if (i == 2) big = res.arch;
    }
    acc_ok += acc0 >= best - 0.02;
    cheap_ok += big == cheapest;
    mono_ok += lat[0] >= lat[1] && lat[1] >= lat[2];
    rows += Fmt(" [seed %llu: acc %.3f/%.3f, lat %.3g>=%.3g>=%.3g ms]", (unsigned long long)seed,
                acc0, best, lat[0] * 1e3, lat[1] * 1e3, lat[2] * 1e3);
  }
  return {acc_ok >= 4 && cheap_ok >= 4 && mono_ok == 5 && slowest < 300.0,
          Fmt("lambda=0 within 2%%: %d/5, lambda=1000 cheapest: %d/5, monotone: %d/5, "
              "slowest run %.1f s;%s",
              acc_ok, cheap_ok, mono_ok, slowest, rows.c_str())};
}

// ---- 11: polynomial speedup ----

Outcome PolynomialSpeedup() {
  const std::string dir = PINAS_DEMO_DIR;
  const HwProfile h;
  double worst = INFINITY;
  std::string rows;
  for (const char* name : {"two_conv", "two_conv_poly"}) {
    const ModelSpec m = LoadModel(dir + "/" + name + ".json");
    const double base = TotalLatency(ModelLatency(BaselineVariant(m), h));
    const double poly = TotalLatency(ModelLatency(PolynomialVariant(m), h));
    worst = std::min(worst, base / poly);
    rows += Fmt(" %s %.2fx", name, base / poly);
  }
  return {worst > 5.0, Fmt("baseline / polynomial latency:%s", rows.c_str())};
}

}  // namespace
}  // namespace pinas

int main() {
  using namespace pinas;
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"share round trip", ShareRoundTrip},
      {"beaver multiplication and square", BeaverProducts},
      {"secure comparison", Comparison},
      {"operator oracles", OperatorOracles},
      {"end-to-end argmax agreement", EndToEnd},
      {"comparison traffic accounting", Accounting},
      {"latency goldens and monotonicity", LatencyFormulas},
      {"maxpool minus relu latency gap", MaxPoolGap},
      {"gradient checks", Gradients},
      {"search behaviour", SearchBehaviour},
      {"polynomial latency ratio", PolynomialSpeedup},
  };
  int failed = 0, id = 0;
  for (const auto& [name, check] : criteria) {
    ++id;
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("%s %2d %s: %s\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %d criteria passed\n", id - failed, id);
  return failed == 0 ? 0 : 1;
}
