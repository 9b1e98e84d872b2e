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

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>

#include "dragoon/group.hpp"

namespace dragoon {

/// The order-11 subgroup of the integers modulo 23, generated by 2.
///
/// Small enough to enumerate exhaustively; used by oracle tests only.
/// Elements encode as one byte holding the residue.
struct TinyGroup {
  static constexpr std::string_view name = "tiny23";
  static constexpr std::uint32_t kModulus = 23;
  static constexpr std::uint32_t kOrder = 11;
  static constexpr std::uint32_t kGenerator = 2;

  struct Scalar {
    std::uint32_t v = 0;

    friend Scalar operator+(Scalar a, Scalar b) { return {(a.v + b.v) % kOrder}; }
    friend Scalar operator-(Scalar a, Scalar b) { return {(a.v + kOrder - b.v) % kOrder}; }
    friend Scalar operator*(Scalar a, Scalar b) { return {(a.v * b.v) % kOrder}; }
    friend Scalar operator-(Scalar a) { return {(kOrder - a.v) % kOrder}; }
    friend bool operator==(Scalar, Scalar) = default;
  };

  struct Element {
    std::uint32_t v = 1;
    friend bool operator==(Element, Element) = default;
  };

  static Element identity() { return {1}; }
  static Element generator() { return {kGenerator}; }
  static Element mul(Element a, Element b) { return {(a.v * b.v) % kModulus}; }

  static Element exp(Element a, Scalar s) {
    std::uint32_t base = a.v, acc = 1, e = s.v;
    while (e) {
      if (e & 1) acc = acc * base % kModulus;
      base = base * base % kModulus;
      e >>= 1;
    }
    return {acc};
  }

  // a^(p-1) is the inverse since a^p = 1 in the subgroup.
  static Element inv(Element a) { return exp(a, {kOrder - 1}); }
  static Element exp_base(Scalar s) { return exp(generator(), s); }

  static bool is_member(std::uint32_t v) {
    return v != 0 && v < kModulus && exp({v}, {kOrder}).v == 1;
  }

  static Bytes encode(Element e) { return {static_cast<std::uint8_t>(e.v)}; }

  static std::optional<Element> decode(ByteView b) {
    if (b.size() != 1 || !is_member(b[0])) return std::nullopt;
    return Element{b[0]};
  }

  static Scalar scalar(std::uint64_t n) { return {static_cast<std::uint32_t>(n % kOrder)}; }
  static Scalar random_scalar(Rng& rng) { return {static_cast<std::uint32_t>(rng.below(kOrder))}; }

  static Scalar scalar_from_digest(const Digest& d) {
    std::uint32_t r = 0;
    for (auto byte : d.bytes) r = (r * 256 + byte) % kOrder;
    return {r};
  }

  static std::array<std::uint8_t, 32> encode_scalar(Scalar s) {
    std::array<std::uint8_t, 32> be{};
    be[31] = static_cast<std::uint8_t>(s.v);
    return be;
  }

  static std::optional<Scalar> decode_scalar(ByteView b) {
    if (b.size() != 32) return std::nullopt;
    for (std::size_t i = 0; i < 31; ++i) {
      if (b[i] != 0) return std::nullopt;
    }
    if (b[31] >= kOrder) return std::nullopt;
    return Scalar{b[31]};
  }
};

static_assert(PrimeOrderGroup<TinyGroup>);

}  // namespace dragoon
