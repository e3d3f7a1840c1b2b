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

#include "pinas/nas/dataset.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

#include "pinas/common/errors.h"

namespace pinas {
namespace {

constexpr double kPi = 3.14159265358979323846;

double PatternPixel(int cls, double i, double j, double phase, double size, double ci,
                    double cj) {
  const double w = 2 * kPi / 4.0;  // period of four pixels
  switch (cls) {
    case 0: return std::sin(w * i + phase);
    case 1: return std::sin(w * j + phase);
    case 2: return std::sin(w * (i + j) / std::sqrt(2.0) + phase);
    case 3: return std::sin(w * (i - j) / std::sqrt(2.0) + phase);
    case 4: return std::sin(w * i + phase) * std::sin(w * j + phase) > 0 ? 1.0 : -1.0;
    case 5: {
      const double r2 = (i - ci) * (i - ci) + (j - cj) * (j - cj);
      return 2 * std::exp(-r2 / (0.05 * size * size)) - 1;
    }
    case 6: {
      const double r = std::sqrt((i - ci) * (i - ci) + (j - cj) * (j - cj));
      return std::abs(r - size / 4.0) < 1.0 ? 1.0 : -1.0;
    }
    default:
      return (std::abs(i - ci) < 1.0 || std::abs(j - cj) < 1.0) ? 1.0 : -1.0;
  }
}

}  // namespace

Dataset Dataset::Subset(const std::vector<int64_t>& idx) const {
  Dataset out;
  out.sample_shape = sample_shape;
  out.num_classes = num_classes;
  const int64_t s = sample_size();
  out.x.reserve(idx.size() * size_t(s));
  for (int64_t i : idx) {
    if (i < 0 || i >= size()) throw ShapeError("dataset index out of range");
    out.x.insert(out.x.end(), x.begin() + i * s, x.begin() + (i + 1) * s);
    out.y.push_back(y[size_t(i)]);
  }
  return out;
}

ad::Var Dataset::Input() const {
  Shape shape{size()};
  shape.insert(shape.end(), sample_shape.begin(), sample_shape.end());
  return ad::Constant(shape, x);
}

void Dataset::Validate() const {
  if (int64_t(x.size()) != size() * sample_size()) throw ShapeError("dataset values/labels differ");
  for (int c : y) {
    if (c < 0 || c >= num_classes) throw ConfigError("label " + std::to_string(c) + " out of range");
  }
}

Dataset MakePatterns(int64_t n, int64_t classes, double noise, uint64_t seed, int64_t channels,
                     int64_t size) {
  if (classes < 2 || classes > 8) throw ConfigError("pattern datasets support 2..8 classes");
  if (n < 0 || channels < 1 || size < 4) throw ConfigError("invalid pattern dataset geometry");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::normal_distribution<double> nd(0.0, 1.0);
  Dataset d;
  d.sample_shape = {channels, size, size};
  d.num_classes = classes;
  for (int64_t s = 0; s < n; ++s) {
    const int cls = int(s % classes);
    const double phase = 2 * kPi * u(rng);
    const double amp = 0.7 + 0.6 * u(rng);
    const double ci = (size - 1) / 2.0 + (u(rng) - 0.5) * size / 4.0;
    const double cj = (size - 1) / 2.0 + (u(rng) - 0.5) * size / 4.0;
    for (int64_t c = 0; c < channels; ++c) {
      const double gain = channels == 1 ? 1.0 : 0.8 + 0.4 * u(rng);
      for (int64_t i = 0; i < size; ++i) {
        for (int64_t j = 0; j < size; ++j) {
          const double v = PatternPixel(cls, double(i), double(j), phase, double(size), ci, cj);
          d.x.push_back(amp * gain * v + noise * nd(rng));
        }
      }
    }
    d.y.push_back(cls);
  }
  // Interleave classes randomly.
  std::vector<int64_t> perm(static_cast<size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  return d.Subset(perm);
}

Dataset MakeSpirals(int64_t n, int64_t classes, double noise, uint64_t seed) {
  if (classes < 2) throw ConfigError("need at least two classes");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::normal_distribution<double> nd(0.0, 1.0);
  Dataset d;
  d.sample_shape = {2};
  d.num_classes = classes;
  for (int64_t s = 0; s < n; ++s) {
    const int cls = int(s % classes);
    const double r = u(rng);
    const double t = 4.0 * r + 2 * kPi * cls / double(classes);
    d.x.push_back(r * std::cos(t) + noise * nd(rng));
    d.x.push_back(r * std::sin(t) + noise * nd(rng));
    d.y.push_back(cls);
  }
  return d;
}

Dataset MakeBlobs(int64_t n, int64_t classes, double spread, uint64_t seed) {
  if (classes < 2) throw ConfigError("need at least two classes");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd(0.0, 1.0);
  Dataset d;
  d.sample_shape = {2};
  d.num_classes = classes;
  for (int64_t s = 0; s < n; ++s) {
    const int cls = int(s % classes);
    const double t = 2 * kPi * cls / double(classes);
    d.x.push_back(std::cos(t) + spread * nd(rng));
    d.x.push_back(std::sin(t) + spread * nd(rng));
    d.y.push_back(cls);
  }
  return d;
}

std::pair<Dataset, Dataset> SplitDataset(const Dataset& d, double fraction, uint64_t seed) {
  if (!(fraction >= 0.0 && fraction <= 1.0)) throw ConfigError("split fraction outside [0, 1]");
  std::vector<int64_t> perm(static_cast<size_t>(d.size()));
  std::iota(perm.begin(), perm.end(), 0);
  std::mt19937_64 rng(seed);
  std::shuffle(perm.begin(), perm.end(), rng);
  const auto cut = perm.begin() + int64_t(std::llround(fraction * double(d.size())));
  return {d.Subset({perm.begin(), cut}), d.Subset({cut, perm.end()})};
}

Dataset LoadImageCsv(const std::string& path, Shape sample_shape, int64_t num_classes) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open dataset " + path);
  Dataset d;
  d.sample_shape = std::move(sample_shape);
  d.num_classes = num_classes;
  const int64_t want = d.sample_size();
  std::string line;
  int64_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> row;
    while (std::getline(ss, cell, ',')) {
      try {
        size_t used = 0;
        row.push_back(std::stod(cell, &used));
        if (cell.find_first_not_of(" \t\r", used) != std::string::npos) throw std::invalid_argument("");
      } catch (const std::exception&) {
        throw ConfigError(path + ":" + std::to_string(lineno) + ": bad number '" + cell + "'");
      }
    }
    if (int64_t(row.size()) != want + 1) {
      throw ConfigError(path + ":" + std::to_string(lineno) + ": expected " +
                        std::to_string(want + 1) + " columns, got " + std::to_string(row.size()));
    }
    const double label = row[0];
    if (label != std::floor(label)) throw ConfigError(path + ": non-integer label");
    d.y.push_back(int(label));
    d.x.insert(d.x.end(), row.begin() + 1, row.end());
  }
  d.Validate();
  return d;
}

void SaveImageCsv(const std::string& path, const Dataset& d) {
  d.Validate();
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out.precision(17);
  const int64_t s = d.sample_size();
  for (int64_t i = 0; i < d.size(); ++i) {
    out << d.y[size_t(i)];
    for (int64_t j = 0; j < s; ++j) out << ',' << d.x[size_t(i * s + j)];
    out << '\n';
  }
  if (!out) throw IoError("write failed for " + path);
}

}  // namespace pinas
