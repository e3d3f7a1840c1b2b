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

#include "pinas/perf/hw_config.h"

#include <fstream>
#include <sstream>

#include "pinas/common/errors.h"

namespace pinas {
namespace {

std::string Trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double ToNumber(const std::string& key, const std::string& v) {
  std::string digits;
  for (char c : v) {
    if (c != '_') digits += c;
  }
  try {
    size_t used = 0;
    const double d = std::stod(digits, &used);
    if (used != digits.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ConfigError("hw profile: '" + key + "' is not a number: " + v);
  }
}

}  // namespace

std::map<std::string, std::string> ParseFlatToml(const std::string& text) {
  std::map<std::string, std::string> out;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    // Strip comments outside quoted strings.
    bool quoted = false;
    for (size_t i = 0; i < line.size(); ++i) {
      if (line[i] == '"') quoted = !quoted;
      if (line[i] == '#' && !quoted) {
        line.resize(i);
        break;
      }
    }
    line = Trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("toml line " + std::to_string(lineno) + ": bad section");
      section = Trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("toml line " + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key = Trim(line.substr(0, eq));
    std::string value = Trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) {
      throw ConfigError("toml line " + std::to_string(lineno) + ": empty key or value");
    }
    if (value.front() == '"') {
      if (value.size() < 2 || value.back() != '"') {
        throw ConfigError("toml line " + std::to_string(lineno) + ": unterminated string");
      }
      value = value.substr(1, value.size() - 2);
    }
    const std::string full = section.empty() ? key : section + "." + key;
    if (!out.emplace(full, value).second) throw ConfigError("toml: duplicate key " + full);
  }
  return out;
}

HwProfile ParseHwProfile(const std::string& text) {
  HwProfile h;
  for (const auto& [full, value] : ParseFlatToml(text)) {
    std::string key = full;
    if (key.rfind("hw.", 0) == 0) key = key.substr(3);
    if (key == "id" || key == "name") {
      h.id = value;
    } else if (key == "pp") {
      h.pp = ToNumber(key, value);
    } else if (key == "freq_hz") {
      h.freq_hz = ToNumber(key, value);
    } else if (key == "rt_bw_bytes_per_s") {
      h.rt_bw_bytes_per_s = ToNumber(key, value);
    } else if (key == "t_bc_s") {
      h.t_bc_s = ToNumber(key, value);
    } else if (key.find('.') != std::string::npos) {
      continue;  // other sections belong to other tools
    } else {
      throw ConfigError("hw profile: unknown key '" + key + "'");
    }
  }
  h.Validate();
  return h;
}

HwProfile LoadHwProfile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open hw profile " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ParseHwProfile(ss.str());
}

std::string HwProfileToToml(const HwProfile& h) {
  std::ostringstream os;
  os.precision(17);
  os << "id = \"" << h.id << "\"\n"
     << "pp = " << h.pp << "\n"
     << "freq_hz = " << h.freq_hz << "\n"
     << "rt_bw_bytes_per_s = " << h.rt_bw_bytes_per_s << "\n"
     << "t_bc_s = " << h.t_bc_s << "\n";
  return os.str();
}

}  // namespace pinas
