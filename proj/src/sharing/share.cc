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

#include "pinas/sharing/share.h"

#include "pinas/common/errors.h"

namespace pinas {
namespace {

void CheckSameParty(const Share& x, const Share& y, const char* what) {
  if (x.party != y.party) {
    throw ShapeError(std::string(what) + ": shares belong to different parties");
  }
}

}  // namespace

std::pair<Share, Share> Shr(const FixedTensor& x, Prg& rng, uint64_t session) {
  const auto& cfg = x.config();
  FixedTensor r(x.shape(), cfg);
  for (int64_t i = 0; i < x.size(); ++i) r[i] = RandomRing(rng, cfg);
  FixedTensor rest = Sub(x, r);
  return {Share{0, std::move(r), session}, Share{1, std::move(rest), session}};
}

FixedTensor Rec(const Share& s0, const Share& s1) {
  if (s0.session != s1.session) throw ShapeError("Rec: session mismatch");
  if (s0.party == s1.party) throw ShapeError("Rec: both shares from one party");
  return Add(s0.tensor, s1.tensor);
}

Share AddScale(RingElem a, const Share& x, const Share& y) {
  CheckSameParty(x, y, "AddScale");
  CheckSameLayout(x.tensor, y.tensor, "AddScale");
  const auto& cfg = x.config();
  FixedTensor out(x.shape(), cfg);
  for (int64_t i = 0; i < x.size(); ++i) {
    out[i] = cfg.Reduce(a * x.tensor[i] + y.tensor[i]);
  }
  return Share{x.party, std::move(out), x.session};
}

Share ShareAdd(const Share& x, const Share& y) {
  CheckSameParty(x, y, "ShareAdd");
  return Share{x.party, Add(x.tensor, y.tensor), x.session};
}

Share ShareSub(const Share& x, const Share& y) {
  CheckSameParty(x, y, "ShareSub");
  return Share{x.party, Sub(x.tensor, y.tensor), x.session};
}

Share ShareNeg(const Share& x) {
  return Share{x.party, Neg(x.tensor), x.session};
}

Share ShareScale(RingElem s, const Share& x) {
  return Share{x.party, Scale(s, x.tensor), x.session};
}

Share AddPublic(const Share& x, const FixedTensor& c) {
  CheckSameLayout(x.tensor, c, "AddPublic");
  if (x.party != 0) return x;
  return Share{0, Add(x.tensor, c), x.session};
}

Share AddPublicScalar(const Share& x, RingElem c) {
  if (x.party != 0) return x;
  Share out = x;
  for (auto& v : out.tensor.data()) v = x.config().Reduce(v + c);
  return out;
}

Share PublicToShare(int party, const FixedTensor& c, uint64_t session) {
  if (party == 0) return Share{0, c, session};
  return Share{1, FixedTensor(c.shape(), c.config()), session};
}

Share Reshaped(const Share& x, Shape shape) {
  return Share{x.party, x.tensor.Reshaped(std::move(shape)), x.session};
}

}  // namespace pinas
