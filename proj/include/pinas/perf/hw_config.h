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

#include <map>
#include <string>

#include "pinas/perf/perf_model.h"

namespace pinas {

// Flat TOML subset: `key = value` lines, `#` comments, optional [section]
// headers (keys become "section.key"), numbers, booleans and quoted strings.
std::map<std::string, std::string> ParseFlatToml(const std::string& text);

// Reads pp, freq_hz, rt_bw_bytes_per_s, t_bc_s (top level or under [hw]).
// Missing keys keep their defaults; unknown keys are a ConfigError.
HwProfile ParseHwProfile(const std::string& text);
HwProfile LoadHwProfile(const std::string& path);
std::string HwProfileToToml(const HwProfile& h);

}  // namespace pinas
