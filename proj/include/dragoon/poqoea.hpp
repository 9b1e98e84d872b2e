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

#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "dragoon/vpke.hpp"

namespace dragoon {

using AnswerVector = std::vector<Plaintext>;

/// Golden-standard questions: 1-based indices into the task and their known
/// solutions, aligned.
struct GoldenSet {
  static constexpr std::size_t kMaxSize = 32;

  std::vector<std::uint32_t> indices;
  std::vector<Plaintext> solutions;

  std::size_t size() const { return indices.size(); }

  /// Empty string when valid for a task of n questions over range.
  std::string validate(std::uint32_t n, const AnswerRange& range) const {
    if (indices.size() != solutions.size()) return "golden indices and solutions differ in length";
    if (indices.size() > kMaxSize) return "more than 32 golden standards";
    for (std::size_t i = 0; i < indices.size(); ++i) {
      if (indices[i] < 1 || indices[i] > n) return "golden index outside [1, N]";
      if (i > 0 && indices[i] <= indices[i - 1]) return "golden indices not strictly increasing";
      if (!range.contains(solutions[i])) return "golden solution outside answer range";
    }
    return {};
  }

  /// Commitment payload: length-prefixed index list, then solution list.
  Bytes encode() const {
    ByteWriter idx, sol;
    for (auto i : indices) idx.u32(i);
    for (auto s : solutions) sol.u32(s);
    ByteWriter w;
    w.field(idx.bytes()).field(sol.bytes());
    return std::move(w).take();
  }

  friend bool operator==(const GoldenSet&, const GoldenSet&) = default;
};

/// Number of golden positions where the answer matches the solution.
inline std::uint32_t quality(const AnswerVector& answers, const GoldenSet& goldens) {
  std::uint32_t count = 0;
  for (std::size_t i = 0; i < goldens.size(); ++i) {
    const auto pos = goldens.indices[i] - 1;
    if (pos < answers.size() && answers[pos] == goldens.solutions[i]) ++count;
  }
  return count;
}

template <PrimeOrderGroup G>
struct EncryptedAnswer {
  std::vector<Ciphertext<G>> items;

  std::size_t size() const { return items.size(); }
  friend bool operator==(const EncryptedAnswer&, const EncryptedAnswer&) = default;

  Bytes encode() const {
    ByteWriter w;
    w.u32(static_cast<std::uint32_t>(items.size()));
    for (const auto& c : items) c.write_to(w);
    return std::move(w).take();
  }

  static std::optional<EncryptedAnswer> decode(ByteView b) {
    ByteReader r(b);
    auto n = r.u32();
    if (!n) return std::nullopt;
    EncryptedAnswer out;
    for (std::uint32_t i = 0; i < *n; ++i) {
      auto c = Ciphertext<G>::read_from(r);
      if (!c) return std::nullopt;
      out.items.push_back(*c);
    }
    if (!r.done()) return std::nullopt;
    return out;
  }
};

/// Disclosed wrong golden answers, each with a proof of correct decryption.
template <PrimeOrderGroup G>
struct QualityProof {
  struct Item {
    std::uint32_t index;  // 1-based question index
    DecResult<G> disclosed;
    DecryptionProof<G> proof;
    friend bool operator==(const Item&, const Item&) = default;
  };

  std::vector<Item> items;

  friend bool operator==(const QualityProof&, const QualityProof&) = default;

  Bytes encode() const {
    ByteWriter w;
    w.u32(static_cast<std::uint32_t>(items.size()));
    for (const auto& it : items) {
      w.u32(it.index);
      it.disclosed.write_to(w);
      w.field(it.proof.encode());
    }
    return std::move(w).take();
  }

  static std::optional<QualityProof> decode(ByteView b) {
    ByteReader r(b);
    auto n = r.u32();
    if (!n || *n > GoldenSet::kMaxSize) return std::nullopt;
    QualityProof out;
    for (std::uint32_t i = 0; i < *n; ++i) {
      auto index = r.u32();
      if (!index) return std::nullopt;
      auto disclosed = DecResult<G>::read_from(r);
      if (!disclosed) return std::nullopt;
      auto f = r.field();
      if (!f) return std::nullopt;
      ByteReader pr(*f);
      auto proof = DecryptionProof<G>::read_from(pr);
      if (!proof || !pr.done()) return std::nullopt;
      out.items.push_back({*index, *disclosed, *proof});
    }
    if (!r.done()) return std::nullopt;
    return out;
  }
};

template <PrimeOrderGroup G>
struct QualityClaim {
  std::int64_t chi;
  QualityProof<G> proof;
};

/// Decrypts every golden position with proof and discloses the ones that
/// miss their solution; the claimed quality is |G| minus the disclosures.
template <PrimeOrderGroup G>
QualityClaim<G> prove_quality(const typename G::Scalar& k, const EncryptedAnswer<G>& c,
                              const GoldenSet& goldens, const DecryptionTable<G>& table,
                              Rng& rng) {
  QualityClaim<G> out{0, {}};
  for (std::size_t i = 0; i < goldens.size(); ++i) {
    const auto index = goldens.indices[i];
    if (index < 1 || index > c.size()) throw std::invalid_argument("golden index beyond answer");
    auto claim = prove_decryption(k, c.items[index - 1], table, rng);
    if (claim.result != DecResult<G>::in_range(goldens.solutions[i])) {
      out.proof.items.push_back({index, claim.result, claim.proof});
    }
  }
  out.chi = static_cast<std::int64_t>(goldens.size()) -
            static_cast<std::int64_t>(out.proof.items.size());
  return out;
}

/// Accepts iff every disclosed item is a distinct golden index, disagrees
/// with its solution and carries a valid decryption proof, and the claimed
/// quality plus the number of items reaches |G|.
template <PrimeOrderGroup G>
bool verify_quality(const typename G::Element& h, const EncryptedAnswer<G>& c, std::int64_t chi,
                    const QualityProof<G>& proof, const GoldenSet& goldens,
                    const DecryptionTable<G>& table) {
  std::set<std::uint32_t> seen;
  std::int64_t counter = chi;
  for (const auto& item : proof.items) {
    auto it = std::lower_bound(goldens.indices.begin(), goldens.indices.end(), item.index);
    if (it == goldens.indices.end() || *it != item.index) return false;
    if (!seen.insert(item.index).second) return false;
    if (item.index < 1 || item.index > c.size()) return false;
    const auto solution = goldens.solutions[static_cast<std::size_t>(it - goldens.indices.begin())];
    if (item.disclosed == DecResult<G>::in_range(solution)) return false;
    if (!verify_decryption(h, item.disclosed, c.items[item.index - 1], item.proof, table)) {
      return false;
    }
    ++counter;
  }
  return counter >= static_cast<std::int64_t>(goldens.size());
}

}  // namespace dragoon
