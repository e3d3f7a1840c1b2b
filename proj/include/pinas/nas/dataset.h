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
#include <utility>
#include <vector>

#include "pinas/nas/autodiff.h"

namespace pinas {

// Labelled samples stored row-major, one sample after another.
struct Dataset {
  Shape sample_shape;
  int64_t num_classes = 0;
  std::vector<double> x;
  std::vector<int> y;

  int64_t size() const { return int64_t(y.size()); }
  int64_t sample_size() const { return NumElements(sample_shape); }
  Dataset Subset(const std::vector<int64_t>& idx) const;
  // Constant input tensor [N, sample_shape...].
  ad::Var Input() const;
  void Validate() const;
};

// Stripes, diagonals, checkers and blobs with random phase and Gaussian
// pixel noise; one pattern family per class (at most 8 classes).
Dataset MakePatterns(int64_t n, int64_t classes, double noise, uint64_t seed,
                     int64_t channels = 1, int64_t size = 8);
// Interleaved 2-D spirals and Gaussian blobs; samples have shape [2].
Dataset MakeSpirals(int64_t n, int64_t classes, double noise, uint64_t seed);
Dataset MakeBlobs(int64_t n, int64_t classes, double spread, uint64_t seed);

// Shuffled split: the first `fraction` of a permutation, then the rest.
std::pair<Dataset, Dataset> SplitDataset(const Dataset& d, double fraction, uint64_t seed);

// CSV rows "label,v0,v1,..." with sample_size values per row; '#' lines are
// comments. Throws IoError / ConfigError.
Dataset LoadImageCsv(const std::string& path, Shape sample_shape, int64_t num_classes);
void SaveImageCsv(const std::string& path, const Dataset& d);

}  // namespace pinas
