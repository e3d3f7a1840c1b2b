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

#include "pinas/sharing/share.h"

namespace pinas {

// Prime-order arithmetic for the OT key agreement. Group elements travel as
// 32-bit words, so the modulus must be below 2^32.
//
// NOT production-grade: the default group is Z_p^* with p = 2^31 - 1, which
// is far too small to resist discrete-log attacks. It reproduces message
// counts and sizes, not security.
struct OtGroup {
  uint64_t modulus = 2147483647;  // 2^31 - 1
  uint64_t generator = 7;         // primitive root mod 2^31 - 1
  std::string note = "toy parameters: correctness and accounting only";

  static OtGroup Default() { return OtGroup{}; }

  // Throws ConfigError unless the modulus is a prime below 2^32 and the
  // generator's order is at least 2^16.
  void Validate() const;
};

uint64_t ModMul(uint64_t a, uint64_t b, uint64_t m);
uint64_t ModPow(uint64_t base, uint64_t exp, uint64_t m);
// Inverse modulo a prime.
uint64_t ModInverse(uint64_t a, uint64_t p);
bool IsPrime(uint64_t n);
std::vector<uint64_t> PrimeFactors(uint64_t n);
// Multiplicative order of g modulo the prime p.
uint64_t ElementOrder(uint64_t g, uint64_t p);

// The sender's step-1 state: secret exponent and public mask S = g^rd.
struct OtSetup {
  uint64_t rd = 0;
  uint64_t s = 0;
};

// rd drawn uniformly from [1, p-2].
OtSetup OtSetupRandom(const OtGroup& group, Prg& rng);
// Throws ConfigError for rd outside [1, p-2] (rd = 0 would give S = 1).
OtSetup OtSetupFromSecret(const OtGroup& group, uint64_t rd);

}  // namespace pinas
