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

#include "pinas/perf/latency_table.h"

#include <cmath>

#include "pinas/common/errors.h"

namespace pinas {

size_t LatencyTable::size() const {
  size_t n = 0;
  for (const auto& row : entries_) n += row.size();
  return n;
}

double LatencyTable::Get(size_t layer, size_t candidate) const {
  ++reads_;
  return entries_.at(layer).at(candidate);
}

std::vector<double> LatencyTable::Row(size_t layer) const {
  reads_ += entries_.at(layer).size();
  return entries_[layer];
}

double CandidateLatency(const SupernetSpec& s, size_t layer, const Candidate& c,
                        const HwProfile& h) {
  const auto geo = s.Geometry();
  const SupernetLayer& l = s.layers.at(layer);
  OpGeometry g;
  g.fi = geo[layer].act_size;
  g.ic = l.out_channels;
  double t = 0;
  switch (c.act) {
    case LayerKind::kRelu:
      t += LatRelu(g, h);
      break;
    case LayerKind::kX2Act:
      t += LatX2Act(g, h);
      break;
    default:
      throw ConfigError(std::string("unknown activation candidate ") + LayerKindName(c.act));
  }
  if (!l.has_pool) return t;
  switch (c.pool) {
    case LayerKind::kMaxPool:
      return t + LatMaxPool(g, h);
    case LayerKind::kAvgPool:
      return t + LatAvgPool(g, h);
    default:
      throw ConfigError(std::string("unknown pool candidate ") + LayerKindName(c.pool));
  }
}

LatencyTable BuildLatencyTable(const SupernetSpec& s, const HwProfile& h) {
  h.Validate();
  std::vector<std::vector<double>> entries;
  for (size_t l = 0; l < s.layers.size(); ++l) {
    std::vector<double> row;
    for (const Candidate& c : s.layers[l].candidates) row.push_back(CandidateLatency(s, l, c, h));
    entries.push_back(std::move(row));
  }
  return LatencyTable(std::move(entries));
}

double ArchLatency(const LatencyTable& t, const std::vector<std::vector<double>>& theta) {
  if (theta.size() != t.layers()) {
    throw ShapeError("theta has " + std::to_string(theta.size()) + " layers, table has " +
                     std::to_string(t.layers()));
  }
  double total = 0;
  for (size_t l = 0; l < theta.size(); ++l) {
    if (theta[l].size() != t.candidates(l)) {
      throw ShapeError("theta row " + std::to_string(l) + " has the wrong length");
    }
    double sum = 0;
    for (size_t j = 0; j < theta[l].size(); ++j) {
      sum += theta[l][j];
      total += theta[l][j] * t.Get(l, j);
    }
    if (std::fabs(sum - 1.0) > 1e-9) {
      throw ConfigError("theta row " + std::to_string(l) + " sums to " + std::to_string(sum));
    }
  }
  return total;
}

}  // namespace pinas
