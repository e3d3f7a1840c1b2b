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

#include <exception>
#include <ostream>

namespace pinas::cli {

// 0 ok, 2 config, 3 protocol, 4 io, 1 anything else.
int ExitCodeFor(const std::exception& e);

// Entry point of the `pi` binary: dealer, run, predict, bench, search, demo.
int Main(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace pinas::cli
