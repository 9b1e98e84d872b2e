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

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

#include "dragoon/bytes.hpp"
#include "dragoon/group.hpp"

namespace dragoon {

using Plaintext = std::uint32_t;

/// Inclusive interval of admissible answers. Kept short so decryption can
/// brute-force the discrete log with a lookup table.
class AnswerRange {
 public:
  static constexpr std::uint64_t kMaxSize = 1u << 16;

  AnswerRange(Plaintext low, Plaintext high) : low_(low), high_(high) {
    if (low > high) throw std::invalid_argument("answer range: low > high");
    if (std::uint64_t{high} - low + 1 > kMaxSize) {
      throw std::invalid_argument("answer range wider than 2^16");
    }
  }

  Plaintext low() const { return low_; }
  Plaintext high() const { return high_; }
  std::uint64_t size() const { return std::uint64_t{high_} - low_ + 1; }
  bool contains(std::uint64_t m) const { return m >= low_ && m <= high_; }

  friend bool operator==(const AnswerRange&, const AnswerRange&) = default;

 private:
  Plaintext low_;
  Plaintext high_;
};

template <PrimeOrderGroup G>
struct KeyPair {
  typename G::Scalar secret;
  typename G::Element pub;

  static KeyPair generate(Rng& rng) {
    auto k = G::random_scalar(rng);
    return {k, G::exp_base(k)};
  }
};

template <PrimeOrderGroup G>
struct Ciphertext {
  typename G::Element c1;
  typename G::Element c2;

  friend bool operator==(const Ciphertext&, const Ciphertext&) = default;

  void write_to(ByteWriter& w) const { w.field(G::encode(c1)).field(G::encode(c2)); }

  static std::optional<Ciphertext> read_from(ByteReader& r) {
    auto a = r.field();
    if (!a) return std::nullopt;
    auto e1 = G::decode(*a);
    auto b = r.field();
    if (!e1 || !b) return std::nullopt;
    auto e2 = G::decode(*b);
    if (!e2) return std::nullopt;
    return Ciphertext{*e1, *e2};
  }
};

/// Outcome of decryption: either a plaintext inside the answer range, or
/// the raw group element c2 / c1^k when no in-range logarithm exists.
template <PrimeOrderGroup G>
struct DecResult {
  struct InRange {
    Plaintext m;
    friend bool operator==(const InRange&, const InRange&) = default;
  };
  struct OutOfRange {
    typename G::Element M;
    friend bool operator==(const OutOfRange&, const OutOfRange&) = default;
  };

  std::variant<InRange, OutOfRange> value;

  static DecResult in_range(Plaintext m) { return {InRange{m}}; }
  static DecResult out_of_range(const typename G::Element& M) { return {OutOfRange{M}}; }

  bool is_in_range() const { return std::holds_alternative<InRange>(value); }
  Plaintext plaintext() const { return std::get<InRange>(value).m; }
  const typename G::Element& element() const { return std::get<OutOfRange>(value).M; }

  friend bool operator==(const DecResult&, const DecResult&) = default;

  void write_to(ByteWriter& w) const {
    if (is_in_range()) {
      w.u8(0).u32(plaintext());
    } else {
      w.u8(1).field(G::encode(element()));
    }
  }

  static std::optional<DecResult> read_from(ByteReader& r) {
    auto tag = r.u8();
    if (!tag) return std::nullopt;
    if (*tag == 0) {
      auto m = r.u32();
      if (!m) return std::nullopt;
      return in_range(*m);
    }
    if (*tag == 1) {
      auto f = r.field();
      if (!f) return std::nullopt;
      auto e = G::decode(*f);
      if (!e) return std::nullopt;
      return out_of_range(*e);
    }
    return std::nullopt;
  }
};

/// Table of g^m for every m in a range. Built once per task and shared
/// read-only afterwards.
template <PrimeOrderGroup G>
class DecryptionTable {
 public:
  explicit DecryptionTable(const AnswerRange& range) : range_(range) {
    powers_.reserve(range.size());
    auto e = G::exp_base(G::scalar(range.low()));
    const auto g = G::generator();
    for (std::uint64_t i = 0; i < range.size(); ++i) {
      const auto m = static_cast<Plaintext>(range.low() + i);
      powers_.push_back(e);
      // First (smallest) preimage wins when a toy group wraps around.
      index_.try_emplace(key(e), m);
      e = G::mul(e, g);
    }
  }

  const AnswerRange& range() const { return range_; }

  std::optional<Plaintext> lookup(const typename G::Element& e) const {
    auto it = index_.find(key(e));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  /// g^m; m must lie in the range.
  const typename G::Element& power(Plaintext m) const { return powers_.at(m - range_.low()); }

 private:
  static std::string key(const typename G::Element& e) {
    auto b = G::encode(e);
    return {b.begin(), b.end()};
  }

  AnswerRange range_;
  std::vector<typename G::Element> powers_;
  std::unordered_map<std::string, Plaintext> index_;
};

/// Schnorr-style transcript proving log_g(h) = log_{c1}(c2 / M).
template <PrimeOrderGroup G>
struct DecryptionProof {
  typename G::Element a;  // c1^x
  typename G::Element b;  // g^x
  typename G::Scalar z;   // x + k * challenge

  friend bool operator==(const DecryptionProof&, const DecryptionProof&) = default;

  void write_to(ByteWriter& w) const {
    w.field(G::encode(a)).field(G::encode(b)).field(G::encode_scalar(z));
  }

  Bytes encode() const {
    ByteWriter w;
    write_to(w);
    return std::move(w).take();
  }

  static std::optional<DecryptionProof> read_from(ByteReader& r) {
    auto fa = r.field();
    if (!fa) return std::nullopt;
    auto ea = G::decode(*fa);
    auto fb = r.field();
    if (!ea || !fb) return std::nullopt;
    auto eb = G::decode(*fb);
    auto fz = r.field();
    if (!eb || !fz) return std::nullopt;
    auto z = G::decode_scalar(*fz);
    if (!z) return std::nullopt;
    return DecryptionProof{*ea, *eb, *z};
  }
};

/// Fiat-Shamir challenge from the hash, interpreted as a scalar.
template <PrimeOrderGroup G>
struct RandomOracle {
  typename G::Scalar operator()(ByteView transcript) const { return hash_to_scalar<G>(transcript); }
};

/// Oracle whose answers can be fixed per transcript; falls back to the
/// hash. Lets tests run the zero-knowledge simulator.
template <PrimeOrderGroup G>
class ProgrammableOracle {
 public:
  void program(ByteView transcript, const typename G::Scalar& c) {
    table_.insert_or_assign(Bytes(transcript.begin(), transcript.end()), c);
  }

  typename G::Scalar operator()(ByteView transcript) const {
    auto it = table_.find(Bytes(transcript.begin(), transcript.end()));
    if (it != table_.end()) return it->second;
    return hash_to_scalar<G>(transcript);
  }

 private:
  std::map<Bytes, typename G::Scalar> table_;
};

/// A || B || g || h || c1 || c2 || M, each field length-prefixed.
template <PrimeOrderGroup G>
Bytes challenge_transcript(const typename G::Element& a, const typename G::Element& b,
                           const typename G::Element& h, const Ciphertext<G>& c,
                           const typename G::Element& message_element) {
  ByteWriter w;
  w.field(G::encode(a))
      .field(G::encode(b))
      .field(G::encode(G::generator()))
      .field(G::encode(h))
      .field(G::encode(c.c1))
      .field(G::encode(c.c2))
      .field(G::encode(message_element));
  return std::move(w).take();
}

template <PrimeOrderGroup G>
Ciphertext<G> encrypt_with(std::uint64_t m, const typename G::Element& h,
                           const typename G::Scalar& r) {
  return {G::exp_base(r), G::mul(G::exp_base(G::scalar(m)), G::exp(h, r))};
}

/// Exponential ElGamal: (g^r, g^m h^r) with fresh r.
template <PrimeOrderGroup G>
Ciphertext<G> encrypt(std::uint64_t m, const typename G::Element& h, Rng& rng) {
  return encrypt_with<G>(m, h, G::random_scalar(rng));
}

template <PrimeOrderGroup G>
typename G::Element decrypt_to_element(const typename G::Scalar& k, const Ciphertext<G>& c) {
  return G::mul(c.c2, G::inv(G::exp(c.c1, k)));
}

/// Total: returns InRange(m) when c2 / c1^k = g^m for some m in range,
/// else the raw element.
template <PrimeOrderGroup G>
DecResult<G> decrypt(const typename G::Scalar& k, const Ciphertext<G>& c,
                     const DecryptionTable<G>& table) {
  auto M = decrypt_to_element(k, c);
  if (auto m = table.lookup(M)) return DecResult<G>::in_range(*m);
  return DecResult<G>::out_of_range(M);
}

template <PrimeOrderGroup G>
struct DecryptionClaim {
  DecResult<G> result;
  DecryptionProof<G> proof;
};

template <PrimeOrderGroup G>
DecryptionClaim<G> prove_decryption(const typename G::Scalar& k, const Ciphertext<G>& c,
                                    const DecryptionTable<G>& table, Rng& rng) {
  auto result = decrypt(k, c, table);
  const auto h = G::exp_base(k);
  const auto x = G::random_scalar(rng);
  const auto a = G::exp(c.c1, x);
  const auto b = G::exp_base(x);
  const auto& message_element =
      result.is_in_range() ? table.power(result.plaintext()) : result.element();
  const auto challenge = hash_to_scalar<G>(challenge_transcript<G>(a, b, h, c, message_element));
  return {result, {a, b, x + k * challenge}};
}

/// Checks both equations
///   M^C * c1^Z == A * c2^C   and   g^Z == B * h^C
/// where M is g^m for an in-range claim or the disclosed element otherwise.
/// Claims that violate the DecResult invariants are rejected.
template <PrimeOrderGroup G, class Oracle = RandomOracle<G>>
bool verify_decryption(const typename G::Element& h, const DecResult<G>& claimed,
                       const Ciphertext<G>& c, const DecryptionProof<G>& proof,
                       const DecryptionTable<G>& table, const Oracle& oracle = {}) {
  typename G::Element message_element;
  if (claimed.is_in_range()) {
    if (!table.range().contains(claimed.plaintext())) return false;
    message_element = table.power(claimed.plaintext());
  } else {
    if (table.lookup(claimed.element())) return false;
    message_element = claimed.element();
  }
  const auto challenge = oracle(challenge_transcript<G>(proof.a, proof.b, h, c, message_element));
  const bool dh_tuple = G::mul(G::exp(message_element, challenge), G::exp(c.c1, proof.z)) ==
                        G::mul(proof.a, G::exp(c.c2, challenge));
  const bool key_knowledge = G::exp_base(proof.z) == G::mul(proof.b, G::exp(h, challenge));
  return dh_tuple && key_knowledge;
}

/// Honest-verifier simulator: picks the response and challenge first and
/// solves for the commitments, then programs the oracle.
template <PrimeOrderGroup G>
DecryptionProof<G> simulate_decryption_proof(const typename G::Element& h,
                                             const DecResult<G>& claimed, const Ciphertext<G>& c,
                                             const DecryptionTable<G>& table, Rng& rng,
                                             ProgrammableOracle<G>& oracle) {
  const auto z = G::random_scalar(rng);
  const auto challenge = G::random_scalar(rng);
  const auto& message_element =
      claimed.is_in_range() ? table.power(claimed.plaintext()) : claimed.element();
  const auto a = G::mul(G::mul(G::exp(message_element, challenge), G::exp(c.c1, z)),
                        G::exp(c.c2, -challenge));
  const auto b = G::mul(G::exp_base(z), G::exp(h, -challenge));
  oracle.program(challenge_transcript<G>(a, b, h, c, message_element), challenge);
  return {a, b, z};
}

}  // namespace dragoon
