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
#include "pinas/ot/oblivious_transfer.h"

#include <gtest/gtest.h>

#include "pinas/common/errors.h"
#include "test_util.h"

namespace pinas {
namespace {

using testing::TwoParty;

TEST(OtGroupTest, SetupExample) {
  OtGroup small{17, 3, "toy"};
  EXPECT_EQ(OtSetupFromSecret(small, 4).s, 13u);
  EXPECT_THROW(OtSetupFromSecret(small, 0), ConfigError);
  EXPECT_THROW(OtSetupFromSecret(small, 16), ConfigError);
  OtGroup degenerate{17, 1, "bad"};
  EXPECT_THROW(OtSetupFromSecret(degenerate, 4), ConfigError);
}

TEST(OtGroupTest, DefaultGroupValidates) {
  const OtGroup g = OtGroup::Default();
  EXPECT_NO_THROW(g.Validate());
  EXPECT_EQ(ElementOrder(g.generator, g.modulus), g.modulus - 1);
  EXPECT_THROW((OtGroup{17, 3, ""}).Validate(), ConfigError);    // order 16
  EXPECT_THROW((OtGroup{65537 * 3, 5, ""}).Validate(), ConfigError);
  EXPECT_THROW((OtGroup{2147483647, 1, ""}).Validate(), ConfigError);
}

TEST(OtGroupTest, ModularHelpers) {
  EXPECT_EQ(ModPow(3, 4, 17), 13u);
  EXPECT_EQ(ModMul(ModInverse(5, 17), 5, 17), 1u);
  EXPECT_TRUE(IsPrime(2147483647));
  EXPECT_FALSE(IsPrime(2147483649));
  EXPECT_EQ(PrimeFactors(2147483646),
            (std::vector<uint64_t>{2, 3, 7, 11, 31, 151, 331}));
}

TEST(OtLocalTest, ReceiverGetsChosenMessageOnly) {
  const OtGroup g = OtGroup::Default();
  Prg rng(21);
  const OtSetup setup = OtSetupRandom(g, rng);
  const int kTransfers = 1000;
  std::vector<uint8_t> choices(kTransfers);
  std::vector<uint32_t> msgs(kTransfers * 4);
  for (auto& c : choices) c = uint8_t(rng() & 3);
  for (auto& m : msgs) m = uint32_t(rng());
  std::vector<uint64_t> secrets;
  auto r_list = OtReceiverChoose(g, setup.s, choices, 4, rng, &secrets);
  auto ct = OtSenderEncrypt(g, setup, r_list, msgs, 4);
  auto got = OtReceiverDecrypt(g, setup.s, secrets, choices, ct, 4);
  int wrong_key_matches = 0;
  for (int t = 0; t < kTransfers; ++t) {
    ASSERT_EQ(got[t], msgs[t * 4 + choices[t]]);
    // The receiver's key opens only its chosen index.
    const uint64_t key = OtReceiverKey(g, setup.s, secrets[t]);
    for (int j = 0; j < 4; ++j) {
      EXPECT_EQ(OtSenderKey(g, setup, r_list[t], j) == key, j == choices[t]);
      if (j == choices[t]) continue;
      wrong_key_matches += (uint32_t(ct[t * 4 + j]) ^ OtPad(key, t, j)) == msgs[t * 4 + j];
    }
  }
  EXPECT_EQ(wrong_key_matches, 0);
}

TEST(OtLocalTest, MalformedRList) {
  const OtGroup g = OtGroup::Default();
  Prg rng(22);
  const OtSetup setup = OtSetupRandom(g, rng);
  std::vector<uint64_t> r_list(3, 5);
  std::vector<uint32_t> msgs(8);
  EXPECT_THROW(OtSenderEncrypt(g, setup, r_list, msgs, 4), ProtocolError);
}

std::vector<uint32_t> Transfer(TwoParty& tp, std::vector<uint32_t> msgs,
                               std::vector<uint8_t> choices) {
  const OtGroup g = OtGroup::Default();
  auto [unused, got] = tp.Run(
      [&](Channel& ch) {
        Party p(ch, 3);
        OtSetup setup;
        OtExchangeSetup(p, g, &setup);
        OtSendBatch(p, g, setup, msgs, 4);
        return 0;
      },
      [&](Channel& ch) {
        Party p(ch, 3);
        const uint64_t s = OtExchangeSetup(p, g, nullptr);
        return OtReceiveBatch(p, g, s, choices, 4);
      });
  (void)unused;
  return got;
}

TEST(OtInteractiveTest, SelectionSemantics) {
  TwoParty tp;
  EXPECT_EQ(Transfer(tp, {10, 20, 30, 40}, {0b10}), (std::vector<uint32_t>{30}));
  const Transcript& t = tp.ch1->transcript();
  EXPECT_EQ(t.rounds(), 3);
  EXPECT_EQ(t.payload_bytes_in_round(0, Direction::kRecv), 4u);
  EXPECT_EQ(t.payload_bytes_in_round(1, Direction::kSend), 4u);
  EXPECT_EQ(t.payload_bytes_in_round(2, Direction::kRecv), 16u);
}

TEST(OtInteractiveTest, EqualMessages) {
  for (uint8_t c = 0; c < 4; ++c) {
    TwoParty tp;
    EXPECT_EQ(Transfer(tp, {7, 7, 7, 7}, {c}), (std::vector<uint32_t>{7}));
  }
}

TEST(OtInteractiveTest, SetupIsOneWord) {
  TwoParty tp;
  const OtGroup g = OtGroup::Default();
  tp.Run(
      [&](Channel& ch) {
        Party p(ch, 1);
        OtSetup setup;
        return OtExchangeSetup(p, g, &setup);
      },
      [&](Channel& ch) {
        Party p(ch, 1);
        return OtExchangeSetup(p, g, nullptr);
      });
  const Transcript& t = tp.ch0->transcript();
  EXPECT_EQ(t.messages(Direction::kSend), 1);
  EXPECT_EQ(t.payload_bytes(Direction::kSend), 4u);
  EXPECT_EQ(t.messages(Direction::kRecv), 0);
}

}  // namespace
}  // namespace pinas
