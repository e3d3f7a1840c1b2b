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

#include <cstdint>
#include <string>
#include <vector>

#include "pinas/nas/supernet.h"
#include "pinas/perf/latency_table.h"

namespace pinas {

enum class Split { kTrain, kVal };

struct LossGraph {
  ad::Var loss;
  std::vector<ad::Var> w;      // leaves laid out like the weight set
  std::vector<ad::Var> alpha;  // leaves laid out like the alpha set
};

// Objective of the bilevel problem: zeta(w, alpha) on the train or the
// validation batch.
class BilevelProblem {
 public:
  virtual ~BilevelProblem() = default;
  virtual LossGraph Build(const TensorSet& w, const TensorSet& alpha, Split split) = 0;
};

struct PassCounters {
  uint64_t forward = 0;
  uint64_t backward = 0;
};

// SGD with momentum and optional global-norm gradient clipping.
class SgdMomentum {
 public:
  SgdMomentum(double lr = 0.05, double momentum = 0.9, double clip = 0.0)
      : lr_(lr), momentum_(momentum), clip_(clip) {}
  void Step(TensorSet& params, const TensorSet& grad);
  double lr() const { return lr_; }

 private:
  double lr_, momentum_, clip_;
  TensorSet velocity_;
};

class Adam {
 public:
  Adam(double lr = 3e-4, double beta1 = 0.5, double beta2 = 0.999, double eps = 1e-8)
      : lr_(lr), b1_(beta1), b2_(beta2), eps_(eps) {}
  void Step(TensorSet& params, const TensorSet& grad);

 private:
  double lr_, b1_, b2_, eps_;
  TensorSet m_, v_;
  int64_t t_ = 0;
};

struct DartsConfig {
  double w_lr = 0.05;
  double w_momentum = 0.9;
  double w_clip = 5.0;  // 0 disables clipping
  double alpha_lr = 3e-4;
  double alpha_beta1 = 0.5;
  double alpha_beta2 = 0.999;
  double xi = -1.0;  // virtual step; negative means w_lr
  double eps_scale = 1e-2;

  double virtual_lr() const { return xi < 0 ? w_lr : xi; }
};

struct AlphaGradient {
  TensorSet delta;        // full second-order gradient
  TensorSet first_order;  // grad_alpha zeta_val(w', alpha)
  TensorSet w_prime;
  double eps = 0.0;
  double zeta_trn = 0.0;
  double zeta_val = 0.0;
};

// delta_alpha = grad_a zeta_val(w', a)
//             - xi (grad_a zeta_trn(w+, a) - grad_a zeta_trn(w-, a)) / (2 eps)
// with w' = w - xi grad_w zeta_trn(w, a), w+- = w +- eps grad_w' zeta_val(w', a)
// and eps = eps_scale / |grad_w' zeta_val|. Four forward and five backward
// passes. A non-finite value aborts with a NumericError naming the pass.
AlphaGradient ComputeAlphaGradient(BilevelProblem& p, const TensorSet& w, const TensorSet& alpha,
                                   double xi, double eps_scale, PassCounters* passes);

struct DartsState {
  TensorSet w;
  TensorSet alpha;
  SgdMomentum w_opt;
  Adam alpha_opt;
  PassCounters passes;

  DartsState(TensorSet w0, TensorSet alpha0, const DartsConfig& cfg);
};

struct StepReport {
  double zeta_trn = 0.0;  // before the weight update
  double zeta_val = 0.0;
  PassCounters passes;    // of this step only
};

// One iteration: the alpha gradient above, an Adam step on alpha, then one
// forward/backward of zeta_trn(w, alpha) and an SGD step on w.
StepReport DartsStep(BilevelProblem& p, DartsState& s, const DartsConfig& cfg);

// Cross-entropy plus lambda * Lat(alpha) on the supernet. The latency table
// is read only when lambda > 0.
class SupernetProblem : public BilevelProblem {
 public:
  SupernetProblem(const Supernet& net, double lambda, const LatencyTable* table);
  void SetBatches(Dataset trn, Dataset val);
  LossGraph Build(const TensorSet& w, const TensorSet& alpha, Split split) override;

  // Parts of the most recent Build.
  double last_ce() const { return last_ce_; }
  double last_latency() const { return last_lat_; }

 private:
  const Supernet& net_;
  double lambda_;
  const LatencyTable* table_;
  Dataset trn_, val_;
  double last_ce_ = 0.0, last_lat_ = 0.0;
};

// Argmax of each layer's logits; exact ties go to the lower-latency
// candidate (then the lower index). The table is read only on a tie.
Arch DeriveArch(const TensorSet& alpha, const LatencyTable* table);
// Sum of table entries of a discrete architecture.
double DiscreteLatency(const LatencyTable& t, const Arch& arch);
// Mean entropy (nats) of the per-layer softmax.
double MeanThetaEntropy(const TensorSet& alpha);

struct TrainConfig {
  int epochs = 10;
  int batch = 32;
  double lr = 0.05;
  double momentum = 0.9;
  double clip = 5.0;
  uint64_t seed = 1;
};

// Mini-batch SGD on the cross-entropy with the mixing vectors of one arch.
TensorSet TrainFixed(const Supernet& net, TensorSet w, const Arch& arch, const Dataset& trn,
                     const TrainConfig& cfg);

// s(epoch) = clamp(start + (end - start) * epoch / epochs, 0, 1); nondecreasing
// when end >= start.
struct ReplacementSchedule {
  double start = 0.0;
  double end = 1.0;
  int epochs = 10;

  void Validate() const;
  double At(int epoch) const;
};

// Post-search replacement: each epoch trains on the blend
// (1 - s) * baseline + s * target, then increments s. The last epoch uses
// s(epochs).
TensorSet TrainWithReplacement(const Supernet& net, TensorSet w, const Arch& baseline,
                               const Arch& target, const ReplacementSchedule& sched,
                               const Dataset& trn, const TrainConfig& cfg);

struct SearchConfig {
  int epochs = 10;
  int batch = 32;
  double lambda = 0.0;
  uint64_t seed = 1;
  double entropy_stop = 0.0;  // stop when mean theta entropy falls below; 0 = off
  DartsConfig darts;
};

struct SearchLogRow {
  int64_t iter = 0;
  double zeta_trn = 0.0;
  double zeta_val = 0.0;
  double latency = 0.0;  // Lat(alpha) under the current theta
  std::vector<std::vector<double>> theta;
};

struct SearchResult {
  TensorSet w;
  TensorSet alpha;
  Arch arch;
  std::vector<SearchLogRow> log;
  PassCounters passes;
  int64_t iterations = 0;
  bool stopped_on_entropy = false;
  // Latency-table reads made inside darts_step calls.
  uint64_t table_reads_in_steps = 0;
};

// Each epoch pairs shuffled train and validation minibatches and runs one
// darts_step per pair.
SearchResult RunSearch(const Supernet& net, const Dataset& trn, const Dataset& val,
                       const LatencyTable& table, const SearchConfig& cfg);

// iter,zeta_trn,zeta_val,lat,<layer>.<candidate label>...
std::string SearchLogCsv(const SupernetSpec& spec, const std::vector<SearchLogRow>& log);

}  // namespace pinas
