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

#include "pinas/ot/ot_group.h"

#include "pinas/common/errors.h"

namespace pinas {

uint64_t ModMul(uint64_t a, uint64_t b, uint64_t m) {
  return uint64_t((unsigned __int128)a * b % m);
}

uint64_t ModPow(uint64_t base, uint64_t exp, uint64_t m) {
  uint64_t result = 1 % m;
  base %= m;
  while (exp) {
    if (exp & 1) result = ModMul(result, base, m);
    base = ModMul(base, base, m);
    exp >>= 1;
  }
  return result;
}

uint64_t ModInverse(uint64_t a, uint64_t p) { return ModPow(a, p - 2, p); }

bool IsPrime(uint64_t n) {
  if (n < 2) return false;
  for (uint64_t q : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (n % q == 0) return n == q;
  }
  uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // Deterministic Miller-Rabin bases for 64-bit inputs.
  for (uint64_t a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    uint64_t x = ModPow(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = ModMul(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

std::vector<uint64_t> PrimeFactors(uint64_t n) {
  std::vector<uint64_t> out;
  for (uint64_t q = 2; q * q <= n; ++q) {
    if (n % q == 0) {
      out.push_back(q);
      while (n % q == 0) n /= q;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

uint64_t ElementOrder(uint64_t g, uint64_t p) {
  uint64_t order = p - 1;
  for (uint64_t q : PrimeFactors(p - 1)) {
    while (order % q == 0 && ModPow(g, order / q, p) == 1) order /= q;
  }
  return order;
}

void OtGroup::Validate() const {
  if (modulus >= (uint64_t{1} << 32)) {
    throw ConfigError("OT modulus must fit in a 32-bit word");
  }
  if (!IsPrime(modulus)) throw ConfigError("OT modulus is not prime");
  const uint64_t g = generator % modulus;
  if (g <= 1) throw ConfigError("degenerate OT generator");
  if (ElementOrder(g, modulus) < (uint64_t{1} << 16)) {
    throw ConfigError("OT generator spans too small a subgroup");
  }
}

OtSetup OtSetupFromSecret(const OtGroup& group, uint64_t rd) {
  if (group.generator % group.modulus <= 1) {
    throw ConfigError("degenerate OT generator");
  }
  if (rd < 1 || rd > group.modulus - 2) {
    throw ConfigError("OT secret exponent must lie in [1, p-2]");
  }
  return {rd, ModPow(group.generator, rd, group.modulus)};
}

OtSetup OtSetupRandom(const OtGroup& group, Prg& rng) {
  std::uniform_int_distribution<uint64_t> dist(1, group.modulus - 2);
  return OtSetupFromSecret(group, dist(rng));
}

}  // namespace pinas
