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
#include <vector>

#include "pinas/nas/supernet_spec.h"
#include "pinas/perf/perf_model.h"

namespace pinas {

// Predicted seconds per (gated layer, candidate): activation plus optional
// pool at the slot's geometry. Counts lookups so tests can assert that a
// search never consulted it.
class LatencyTable {
 public:
  LatencyTable() = default;
  explicit LatencyTable(std::vector<std::vector<double>> entries)
      : entries_(std::move(entries)) {}

  size_t layers() const { return entries_.size(); }
  size_t candidates(size_t layer) const { return entries_.at(layer).size(); }
  size_t size() const;

  double Get(size_t layer, size_t candidate) const;
  // Row of one layer; counts one read per entry.
  std::vector<double> Row(size_t layer) const;

  uint64_t reads() const { return reads_; }
  void ResetReads() { reads_ = 0; }

 private:
  std::vector<std::vector<double>> entries_;
  mutable uint64_t reads_ = 0;
};

// Latency of one candidate at one slot. Throws ConfigError for candidate
// kinds that are not activations / pools.
double CandidateLatency(const SupernetSpec& s, size_t layer, const Candidate& c,
                        const HwProfile& h);

LatencyTable BuildLatencyTable(const SupernetSpec& s, const HwProfile& h);

// sum_l sum_j theta[l][j] * Lat(l, j). Throws ShapeError on dimension
// mismatch and ConfigError when a theta row does not sum to 1.
double ArchLatency(const LatencyTable& t, const std::vector<std::vector<double>>& theta);

}  // namespace pinas
