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

#include "pinas/nas/search.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "pinas/common/errors.h"

namespace pinas {
namespace {

// Runs one forward (Build) and counts it; NaN is reported with the pass name.
LossGraph Forward(BilevelProblem& p, const TensorSet& w, const TensorSet& a, Split s,
                  PassCounters* c, const char* pass) {
  if (c) ++c->forward;
  LossGraph g = p.Build(w, a, s);
  if (!std::isfinite(g.loss.item())) {
    throw NumericError(std::string("darts_step ") + pass + ": loss is " +
                       std::to_string(g.loss.item()));
  }
  return g;
}

void Backward(const LossGraph& g, PassCounters* c, const char* pass) {
  if (c) ++c->backward;
  try {
    ad::Backward(g.loss);
  } catch (const NumericError& e) {
    throw NumericError(std::string("darts_step ") + pass + ": " + e.what());
  }
}

std::vector<std::vector<int64_t>> Batches(int64_t n, int batch, std::mt19937_64& rng) {
  std::vector<int64_t> perm(static_cast<size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<std::vector<int64_t>> out;
  for (int64_t i = 0; i < n; i += batch) {
    out.emplace_back(perm.begin() + i, perm.begin() + std::min(n, i + batch));
  }
  return out;
}

}  // namespace

void SgdMomentum::Step(TensorSet& params, const TensorSet& grad) {
  params.CheckLayout(grad, "SgdMomentum");
  if (velocity_.count() == 0) velocity_ = params.ZerosLike();
  double scale = 1.0;
  if (clip_ > 0) {
    const double n = grad.Norm();
    if (n > clip_) scale = clip_ / n;
  }
  for (size_t i = 0; i < params.count(); ++i) {
    for (size_t j = 0; j < params.values[i].size(); ++j) {
      double& v = velocity_.values[i][j];
      v = momentum_ * v + scale * grad.values[i][j];
      params.values[i][j] -= lr_ * v;
    }
  }
}

void Adam::Step(TensorSet& params, const TensorSet& grad) {
  params.CheckLayout(grad, "Adam");
  if (m_.count() == 0) {
    m_ = params.ZerosLike();
    v_ = params.ZerosLike();
  }
  ++t_;
  const double c1 = 1 - std::pow(b1_, double(t_)), c2 = 1 - std::pow(b2_, double(t_));
  for (size_t i = 0; i < params.count(); ++i) {
    for (size_t j = 0; j < params.values[i].size(); ++j) {
      const double g = grad.values[i][j];
      double& m = m_.values[i][j];
      double& v = v_.values[i][j];
      m = b1_ * m + (1 - b1_) * g;
      v = b2_ * v + (1 - b2_) * g * g;
      params.values[i][j] -= lr_ * (m / c1) / (std::sqrt(v / c2) + eps_);
    }
  }
}

AlphaGradient ComputeAlphaGradient(BilevelProblem& p, const TensorSet& w, const TensorSet& alpha,
                                   double xi, double eps_scale, PassCounters* passes) {
  if (!(eps_scale > 0)) throw ConfigError("eps scale must be positive");
  AlphaGradient out;
  // w' = w - xi grad_w zeta_trn(w, a)
  LossGraph trn = Forward(p, w, alpha, Split::kTrain, passes, "train(w)");
  Backward(trn, passes, "train(w)");
  out.zeta_trn = trn.loss.item();
  out.w_prime = w.Axpy(-xi, w.GradientsOf(trn.w));

  // grad_w' and grad_a of zeta_val(w', a), as two reverse passes.
  LossGraph val = Forward(p, out.w_prime, alpha, Split::kVal, passes, "val(w')");
  out.zeta_val = val.loss.item();
  Backward(val, passes, "val(w') wrt w'");
  const TensorSet dw = out.w_prime.GradientsOf(val.w);
  Backward(val, passes, "val(w') wrt alpha");
  out.first_order = alpha.GradientsOf(val.alpha);

  const double norm = dw.Norm();
  out.delta = out.first_order;
  if (norm == 0.0) {
    throw NumericError("darts_step val(w'): zero weight gradient, eps is undefined");
  }
  out.eps = eps_scale / norm;
  LossGraph plus = Forward(p, w.Axpy(out.eps, dw), alpha, Split::kTrain, passes, "train(w+)");
  Backward(plus, passes, "train(w+)");
  const TensorSet ga_plus = alpha.GradientsOf(plus.alpha);
  LossGraph minus = Forward(p, w.Axpy(-out.eps, dw), alpha, Split::kTrain, passes, "train(w-)");
  Backward(minus, passes, "train(w-)");
  const TensorSet ga_minus = alpha.GradientsOf(minus.alpha);
  const TensorSet hessian = ga_plus.Axpy(-1.0, ga_minus);
  out.delta = out.first_order.Axpy(-xi / (2 * out.eps), hessian);
  return out;
}

DartsState::DartsState(TensorSet w0, TensorSet alpha0, const DartsConfig& cfg)
    : w(std::move(w0)),
      alpha(std::move(alpha0)),
      w_opt(cfg.w_lr, cfg.w_momentum, cfg.w_clip),
      alpha_opt(cfg.alpha_lr, cfg.alpha_beta1, cfg.alpha_beta2) {}

StepReport DartsStep(BilevelProblem& p, DartsState& s, const DartsConfig& cfg) {
  StepReport r;
  const AlphaGradient g =
      ComputeAlphaGradient(p, s.w, s.alpha, cfg.virtual_lr(), cfg.eps_scale, &r.passes);
  s.alpha_opt.Step(s.alpha, g.delta);
  r.zeta_trn = g.zeta_trn;
  r.zeta_val = g.zeta_val;

  LossGraph trn = Forward(p, s.w, s.alpha, Split::kTrain, &r.passes, "train(w) update");
  Backward(trn, &r.passes, "train(w) update");
  s.w_opt.Step(s.w, s.w.GradientsOf(trn.w));
  s.passes.forward += r.passes.forward;
  s.passes.backward += r.passes.backward;
  return r;
}

SupernetProblem::SupernetProblem(const Supernet& net, double lambda, const LatencyTable* table)
    : net_(net), lambda_(lambda), table_(table) {
  if (!(lambda >= 0)) throw ConfigError("lambda must be >= 0");
  if (lambda > 0 && table == nullptr) throw ConfigError("lambda > 0 needs a latency table");
}

void SupernetProblem::SetBatches(Dataset trn, Dataset val) {
  trn_ = std::move(trn);
  val_ = std::move(val);
}

LossGraph SupernetProblem::Build(const TensorSet& w, const TensorSet& alpha, Split split) {
  const Dataset& d = split == Split::kTrain ? trn_ : val_;
  if (d.size() == 0) throw ConfigError("empty minibatch");
  LossGraph g;
  g.w = w.Leaves();
  g.alpha = alpha.Leaves();
  const auto theta = net_.GatedTheta(g.alpha);
  const ad::Var ce = ad::SoftmaxCrossEntropy(net_.Forward(g.w, theta, d.Input()), d.y);
  last_ce_ = ce.item();
  last_lat_ = 0.0;
  if (lambda_ == 0.0) {
    g.loss = ce;
    return g;
  }
  ad::Var lat = ad::Dot(theta[0], table_->Row(0));
  for (size_t l = 1; l < theta.size(); ++l) lat = ad::Add(lat, ad::Dot(theta[l], table_->Row(l)));
  last_lat_ = lat.item();
  g.loss = ad::Add(ce, ad::Scale(lat, lambda_));
  return g;
}

Arch DeriveArch(const TensorSet& alpha, const LatencyTable* table) {
  Arch arch;
  for (size_t l = 0; l < alpha.count(); ++l) {
    const auto& a = alpha.values[l];
    if (a.empty()) throw ConfigError("layer without candidates");
    const double best = *std::max_element(a.begin(), a.end());
    std::vector<int> tied;
    for (size_t k = 0; k < a.size(); ++k) {
      if (a[k] == best) tied.push_back(int(k));
    }
    int pick = tied[0];
    if (tied.size() > 1 && table != nullptr) {
      for (int k : tied) {
        if (table->Get(l, size_t(k)) < table->Get(l, size_t(pick))) pick = k;
      }
    }
    arch.push_back(pick);
  }
  return arch;
}

double DiscreteLatency(const LatencyTable& t, const Arch& arch) {
  if (arch.size() != t.layers()) throw ShapeError("architecture length differs from the table");
  double s = 0;
  for (size_t l = 0; l < arch.size(); ++l) s += t.Get(l, size_t(arch[l]));
  return s;
}

double MeanThetaEntropy(const TensorSet& alpha) {
  if (alpha.count() == 0) return 0.0;
  double h = 0;
  for (const auto& row : ThetaOf(alpha)) {
    for (double t : row) {
      if (t > 0) h -= t * std::log(t);
    }
  }
  return h / double(alpha.count());
}

TensorSet TrainFixed(const Supernet& net, TensorSet w, const Arch& arch, const Dataset& trn,
                     const TrainConfig& cfg) {
  return TrainWithReplacement(net, std::move(w), arch, arch, {0.0, 0.0, cfg.epochs}, trn, cfg);
}

void ReplacementSchedule::Validate() const {
  if (epochs <= 0) throw ConfigError("replacement schedule needs epochs > 0");
  if (!(start >= 0 && start <= 1 && end >= 0 && end <= 1)) {
    throw ConfigError("replacement ratios must lie in [0, 1]");
  }
  if (end < start) throw ConfigError("replacement schedule must be nondecreasing");
}

double ReplacementSchedule::At(int epoch) const {
  Validate();
  const double s = start + (end - start) * double(epoch) / double(epochs);
  return std::clamp(s, 0.0, 1.0);
}

TensorSet TrainWithReplacement(const Supernet& net, TensorSet w, const Arch& baseline,
                               const Arch& target, const ReplacementSchedule& sched,
                               const Dataset& trn, const TrainConfig& cfg) {
  sched.Validate();
  if (cfg.batch <= 0 || trn.size() == 0) throw ConfigError("training needs data and batch > 0");
  std::mt19937_64 rng(cfg.seed);
  SgdMomentum opt(cfg.lr, cfg.momentum, cfg.clip);
  for (int e = 1; e <= cfg.epochs; ++e) {
    // The ratio is incremented after every epoch and reaches s(epochs).
    const int sched_epoch = int(std::llround(double(e) * sched.epochs / double(cfg.epochs)));
    const double s = sched.At(sched_epoch);
    const auto theta = net.BlendTheta(baseline, target, s);
    for (const auto& idx : Batches(trn.size(), cfg.batch, rng)) {
      const Dataset b = trn.Subset(idx);
      const auto leaves = w.Leaves();
      const ad::Var loss = ad::SoftmaxCrossEntropy(net.Forward(leaves, theta, b.Input()), b.y);
      ad::Backward(loss);
      opt.Step(w, w.GradientsOf(leaves));
    }
  }
  return w;
}

SearchResult RunSearch(const Supernet& net, const Dataset& trn, const Dataset& val,
                       const LatencyTable& table, const SearchConfig& cfg) {
  if (cfg.epochs <= 0 || cfg.batch <= 0) throw ConfigError("search needs epochs and batch > 0");
  if (trn.size() == 0 || val.size() == 0) throw ConfigError("search needs train and val data");
  if (cfg.lambda > 0 && table.layers() != net.spec().layers.size()) {
    throw ShapeError("latency table does not match the supernet");
  }
  std::mt19937_64 rng(cfg.seed);
  Prg init_rng(cfg.seed);
  SearchResult res;
  DartsState state(net.InitWeights(init_rng), net.InitAlpha(), cfg.darts);
  SupernetProblem problem(net, cfg.lambda, cfg.lambda > 0 ? &table : nullptr);
  for (int e = 0; e < cfg.epochs && !res.stopped_on_entropy; ++e) {
    const auto tb = Batches(trn.size(), cfg.batch, rng);
    const auto vb = Batches(val.size(), cfg.batch, rng);
    for (size_t i = 0; i < tb.size(); ++i) {
      problem.SetBatches(trn.Subset(tb[i]), val.Subset(vb[i % vb.size()]));
      const uint64_t reads = table.reads();
      const StepReport r = DartsStep(problem, state, cfg.darts);
      res.table_reads_in_steps += table.reads() - reads;
      SearchLogRow row;
      row.iter = res.iterations++;
      row.zeta_trn = r.zeta_trn;
      row.zeta_val = r.zeta_val;
      row.theta = ThetaOf(state.alpha);
      if (table.layers() == row.theta.size()) row.latency = ArchLatency(table, row.theta);
      res.log.push_back(std::move(row));
    }
    if (cfg.entropy_stop > 0 && MeanThetaEntropy(state.alpha) < cfg.entropy_stop) {
      res.stopped_on_entropy = true;
    }
  }
  res.w = state.w;
  res.alpha = state.alpha;
  res.passes = state.passes;
  res.arch = DeriveArch(state.alpha, &table);
  return res;
}

std::string SearchLogCsv(const SupernetSpec& spec, const std::vector<SearchLogRow>& log) {
  std::ostringstream os;
  os.precision(10);
  os << "iter,zeta_trn,zeta_val,lat";
  for (const auto& l : spec.layers) {
    for (const auto& c : l.candidates) os << ',' << l.name << '.' << c.Label(l.has_pool);
  }
  os << '\n';
  for (const auto& r : log) {
    os << r.iter << ',' << r.zeta_trn << ',' << r.zeta_val << ',' << r.latency;
    for (const auto& row : r.theta) {
      for (double t : row) os << ',' << t;
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace pinas
