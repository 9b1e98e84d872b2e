// Copyright 2026 The Dragoon-Sim Authors.
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

#include <map>
#include <numeric>

#include "dragoon/poqoea.hpp"
#include "dragoon/ristretto255.hpp"
#include "dragoon/tiny_group.hpp"
#include "gtest/gtest.h"

namespace dragoon {
namespace {

using R = Ristretto255;
using T = TinyGroup;

// Independent recount: map index -> solution, then fold over the answer
// vector positions.
std::uint32_t recount(const AnswerVector& a, const GoldenSet& gs) {
  std::map<std::uint32_t, Plaintext> sol;
  for (std::size_t i = 0; i < gs.size(); ++i) sol[gs.indices[i]] = gs.solutions[i];
  std::uint32_t pos = 0;
  return std::accumulate(a.begin(), a.end(), 0u, [&](std::uint32_t acc, Plaintext v) {
    ++pos;
    auto it = sol.find(pos);
    return acc + (it != sol.end() && it->second == v ? 1u : 0u);
  });
}

GoldenSet random_goldens(Rng& rng, std::uint32_t n, std::size_t count, const AnswerRange& range) {
  std::vector<std::uint32_t> all(n);
  std::iota(all.begin(), all.end(), 1u);
  std::shuffle(all.begin(), all.end(), rng);
  all.resize(count);
  std::sort(all.begin(), all.end());
  GoldenSet gs{all, {}};
  for (std::size_t i = 0; i < count; ++i) {
    gs.solutions.push_back(range.low() + static_cast<Plaintext>(rng.below(range.size())));
  }
  return gs;
}

template <class G>
EncryptedAnswer<G> encrypt_all(const AnswerVector& a, const typename G::Element& h, Rng& rng) {
  EncryptedAnswer<G> c;
  for (auto v : a) c.items.push_back(encrypt<G>(v, h, rng));
  return c;
}

TEST(QualityTest, Examples) {
  GoldenSet gs{{2, 5, 9}, {1, 0, 1}};
  AnswerVector a(10, 0);
  a[1] = 1;
  a[4] = 1;
  a[8] = 1;
  EXPECT_EQ(quality(a, gs), 2u);
  a[4] = 0;
  EXPECT_EQ(quality(a, gs), 3u);
}

TEST(QualityTest, MatchesIndependentRecount) {
  Rng rng(1);
  for (int i = 0; i < 2000; ++i) {
    const auto n = static_cast<std::uint32_t>(1 + rng.below(12));
    const AnswerRange range(0, static_cast<Plaintext>(rng.below(4)));
    auto gs = random_goldens(rng, n, rng.below(n + 1), range);
    AnswerVector a(n);
    for (auto& v : a) v = static_cast<Plaintext>(rng.below(range.size() + 1));
    const auto q = quality(a, gs);
    ASSERT_EQ(q, recount(a, gs));
    ASSERT_LE(q, gs.size());
  }
}

TEST(GoldenSetTest, Validation) {
  const AnswerRange binary(0, 1);
  EXPECT_TRUE((GoldenSet{{1, 3}, {0, 1}}).validate(3, binary).empty());
  EXPECT_FALSE((GoldenSet{{0, 3}, {0, 1}}).validate(3, binary).empty());
  EXPECT_FALSE((GoldenSet{{1, 4}, {0, 1}}).validate(3, binary).empty());
  EXPECT_FALSE((GoldenSet{{3, 1}, {0, 1}}).validate(3, binary).empty());
  EXPECT_FALSE((GoldenSet{{1, 1}, {0, 1}}).validate(3, binary).empty());
  EXPECT_FALSE((GoldenSet{{1, 2}, {0, 2}}).validate(3, binary).empty());
  EXPECT_FALSE((GoldenSet{{1}, {0, 1}}).validate(3, binary).empty());
  GoldenSet big;
  for (std::uint32_t i = 1; i <= 33; ++i) {
    big.indices.push_back(i);
    big.solutions.push_back(0);
  }
  EXPECT_FALSE(big.validate(40, binary).empty());
}

class PoqoeaTest : public ::testing::Test {
 protected:
  Rng rng{2};
  KeyPair<R> kp = KeyPair<R>::generate(rng);
  DecryptionTable<R> table{AnswerRange(0, 1)};
  GoldenSet gs{{3, 10, 17, 40, 77, 101}, {1, 0, 1, 1, 0, 1}};

  AnswerVector with_correct(std::size_t correct) {
    AnswerVector a(106, 0);
    for (std::size_t i = 0; i < gs.size(); ++i) {
      a[gs.indices[i] - 1] = i < correct ? gs.solutions[i] : 1 - gs.solutions[i];
    }
    return a;
  }
};

TEST_F(PoqoeaTest, AllCorrectGivesEmptyProof) {
  auto c = encrypt_all<R>(with_correct(6), kp.pub, rng);
  auto claim = prove_quality(kp.secret, c, gs, table, rng);
  EXPECT_TRUE(claim.proof.items.empty());
  EXPECT_EQ(claim.chi, 6);
  EXPECT_TRUE(verify_quality(kp.pub, c, claim.chi, claim.proof, gs, table));
}

TEST_F(PoqoeaTest, ThreeWrongOfSix) {
  auto c = encrypt_all<R>(with_correct(3), kp.pub, rng);
  auto claim = prove_quality(kp.secret, c, gs, table, rng);
  EXPECT_EQ(claim.proof.items.size(), 3u);
  EXPECT_EQ(claim.chi, 3);
  EXPECT_TRUE(verify_quality(kp.pub, c, claim.chi, claim.proof, gs, table));
  EXPECT_FALSE(verify_quality(kp.pub, c, claim.chi - 1, claim.proof, gs, table));
}

TEST_F(PoqoeaTest, FullClaimWithEmptyProofAccepted) {
  auto c = encrypt_all<R>(with_correct(0), kp.pub, rng);
  EXPECT_TRUE(verify_quality(kp.pub, c, 6, QualityProof<R>{}, gs, table));
  EXPECT_FALSE(verify_quality(kp.pub, c, 5, QualityProof<R>{}, gs, table));
}

TEST_F(PoqoeaTest, RejectsReplayedAndForeignItems) {
  auto c = encrypt_all<R>(with_correct(4), kp.pub, rng);
  auto claim = prove_quality(kp.secret, c, gs, table, rng);
  ASSERT_EQ(claim.proof.items.size(), 2u);

  auto replay = claim.proof;
  replay.items.push_back(replay.items.front());
  EXPECT_FALSE(verify_quality(kp.pub, c, claim.chi - 1, replay, gs, table));

  // A valid decryption proof for a non-golden position.
  auto foreign = claim.proof;
  auto extra = prove_decryption(kp.secret, c.items[0], table, rng);
  foreign.items.push_back({1, extra.result, extra.proof});
  EXPECT_FALSE(verify_quality(kp.pub, c, claim.chi - 1, foreign, gs, table));

  // Disclosing a golden's own solution.
  auto right = claim.proof;
  auto honest = prove_decryption(kp.secret, c.items[gs.indices[0] - 1], table, rng);
  right.items.push_back({gs.indices[0], honest.result, honest.proof});
  EXPECT_FALSE(verify_quality(kp.pub, c, claim.chi - 1, right, gs, table));

  // Lying about a correct answer with a proof of its true value.
  auto lie = claim.proof;
  lie.items.push_back({gs.indices[0], DecResult<R>::in_range(1 - gs.solutions[0]), honest.proof});
  EXPECT_FALSE(verify_quality(kp.pub, c, claim.chi - 1, lie, gs, table));

  // Index past the end of the ciphertext vector.
  GoldenSet wide{{3, 200}, {1, 1}};
  QualityProof<R> oob{{{200, DecResult<R>::in_range(0), honest.proof}}};
  EXPECT_FALSE(verify_quality(kp.pub, c, 1, oob, wide, table));
}

TEST_F(PoqoeaTest, OutOfRangeAnswerCountsAsWrong) {
  auto a = with_correct(6);
  a[gs.indices[2] - 1] = 7;
  auto c = encrypt_all<R>(a, kp.pub, rng);
  auto claim = prove_quality(kp.secret, c, gs, table, rng);
  ASSERT_EQ(claim.proof.items.size(), 1u);
  EXPECT_FALSE(claim.proof.items[0].disclosed.is_in_range());
  EXPECT_EQ(claim.chi, 5);
  EXPECT_TRUE(verify_quality(kp.pub, c, claim.chi, claim.proof, gs, table));
}

TEST_F(PoqoeaTest, CompletenessOverRandomInstances) {
  int accepted = 0;
  for (int i = 0; i < 500; ++i) {
    const auto n = static_cast<std::uint32_t>(2 + rng.below(10));
    auto goldens = random_goldens(rng, n, 1 + rng.below(std::min<std::uint32_t>(n, 6)),
                                  table.range());
    AnswerVector a(n);
    for (auto& v : a) v = static_cast<Plaintext>(rng.below(2));
    auto c = encrypt_all<R>(a, kp.pub, rng);
    auto claim = prove_quality(kp.secret, c, goldens, table, rng);
    ASSERT_EQ(claim.chi, static_cast<std::int64_t>(quality(a, goldens)));
    accepted += verify_quality(kp.pub, c, claim.chi, claim.proof, goldens, table);
  }
  EXPECT_EQ(accepted, 500);
}

TEST_F(PoqoeaTest, SerializationRoundTrip) {
  auto a = with_correct(2);
  a[gs.indices[5] - 1] = 9;
  auto c = encrypt_all<R>(a, kp.pub, rng);
  auto claim = prove_quality(kp.secret, c, gs, table, rng);
  auto bytes = claim.proof.encode();
  auto back = QualityProof<R>::decode(bytes);
  ASSERT_TRUE(back);
  EXPECT_EQ(*back, claim.proof);
  bytes.push_back(0);
  EXPECT_FALSE(QualityProof<R>::decode(bytes));
  auto cb = EncryptedAnswer<R>::decode(c.encode());
  ASSERT_TRUE(cb);
  EXPECT_EQ(*cb, c);
}

TEST(TinyPoqoeaTest, ClaimedQualityMatchesDecryptAndCount) {
  Rng rng(3);
  DecryptionTable<T> table(AnswerRange(0, 1));
  for (int i = 0; i < 100; ++i) {
    auto kp = KeyPair<T>::generate(rng);
    const auto n = static_cast<std::uint32_t>(1 + rng.below(10));
    auto gs = random_goldens(rng, n, 1 + rng.below(n), table.range());
    AnswerVector a(n);
    for (auto& v : a) v = static_cast<Plaintext>(rng.below(2));
    auto c = encrypt_all<T>(a, kp.pub, rng);
    AnswerVector decrypted;
    for (const auto& ct : c.items) decrypted.push_back(decrypt(kp.secret, ct, table).plaintext());
    auto claim = prove_quality(kp.secret, c, gs, table, rng);
    EXPECT_EQ(claim.chi, static_cast<std::int64_t>(recount(decrypted, gs)));
  }
}

// Every answer pattern over six binary goldens, every claim, every subset
// of the genuinely wrong disclosures.
TEST(TinyPoqoeaTest, UpperBoundSoundnessExhaustive) {
  Rng rng(4);
  auto kp = KeyPair<T>::generate(rng);
  DecryptionTable<T> table(AnswerRange(0, 1));
  const GoldenSet gs{{1, 2, 3, 4, 5, 6}, {1, 0, 1, 1, 0, 1}};
  for (std::uint32_t pattern = 0; pattern < 64; ++pattern) {
    AnswerVector a(6);
    for (std::size_t i = 0; i < 6; ++i) a[i] = (pattern >> i) & 1;
    const auto q = static_cast<std::int64_t>(quality(a, gs));
    auto c = encrypt_all<T>(a, kp.pub, rng);
    auto full = prove_quality(kp.secret, c, gs, table, rng).proof;
    const std::size_t wrong = full.items.size();
    for (std::int64_t chi = 0; chi <= 6; ++chi) {
      bool any = false;
      for (std::uint32_t mask = 0; mask < (1u << wrong); ++mask) {
        QualityProof<T> sub;
        for (std::size_t j = 0; j < wrong; ++j) {
          if (mask >> j & 1) sub.items.push_back(full.items[j]);
        }
        const bool ok = verify_quality(kp.pub, c, chi, sub, gs, table);
        ASSERT_EQ(ok, chi + static_cast<std::int64_t>(sub.items.size()) >= 6)
            << pattern << " " << chi << " " << mask;
        any |= ok;
        // Adding one more wrong item and lowering the claim stays valid.
        if (ok && sub.items.size() < wrong) {
          for (std::size_t j = 0; j < wrong; ++j) {
            if (mask >> j & 1) continue;
            auto more = sub;
            more.items.push_back(full.items[j]);
            ASSERT_TRUE(verify_quality(kp.pub, c, chi - 1, more, gs, table));
            break;
          }
        }
      }
      ASSERT_EQ(any, chi >= q) << pattern << " " << chi;
    }
  }
}

}  // namespace
}  // namespace dragoon
