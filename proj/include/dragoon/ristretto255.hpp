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

#include <sodium.h>

#include <algorithm>
#include <array>
#include <cstring>
#include <optional>
#include <string_view>

#include "dragoon/group.hpp"

namespace dragoon {

/// Production backend: the ristretto255 prime-order group (order
/// 2^252 + 27742317777372353535851937790883648493) via libsodium.
struct Ristretto255 {
  static constexpr std::string_view name = "ristretto255";
  static constexpr std::string_view order_decimal =
      "7237005577332262213973186563042994240857116359379907606001950938285454250989";

  struct Scalar {
    /// Little-endian, fully reduced (libsodium's native layout).
    std::array<std::uint8_t, 32> le{};

    friend Scalar operator+(const Scalar& a, const Scalar& b) {
      Scalar r;
      crypto_core_ristretto255_scalar_add(r.le.data(), a.le.data(), b.le.data());
      return r;
    }
    friend Scalar operator-(const Scalar& a, const Scalar& b) {
      Scalar r;
      crypto_core_ristretto255_scalar_sub(r.le.data(), a.le.data(), b.le.data());
      return r;
    }
    friend Scalar operator*(const Scalar& a, const Scalar& b) {
      Scalar r;
      crypto_core_ristretto255_scalar_mul(r.le.data(), a.le.data(), b.le.data());
      return r;
    }
    friend Scalar operator-(const Scalar& a) {
      Scalar r;
      crypto_core_ristretto255_scalar_negate(r.le.data(), a.le.data());
      return r;
    }
    friend bool operator==(const Scalar&, const Scalar&) = default;

    bool is_zero() const {
      return std::all_of(le.begin(), le.end(), [](auto b) { return b == 0; });
    }
  };

  struct Element {
    std::array<std::uint8_t, 32> enc{};
    friend bool operator==(const Element&, const Element&) = default;
  };

  static Element identity() { return {}; }

  static Element generator() {
    static const Element g = exp_base(scalar(1));
    return g;
  }

  static Element mul(const Element& a, const Element& b) {
    Element r;
    crypto_core_ristretto255_add(r.enc.data(), a.enc.data(), b.enc.data());
    return r;
  }

  static Element inv(const Element& a) {
    Element r;
    Element id = identity();
    crypto_core_ristretto255_sub(r.enc.data(), id.enc.data(), a.enc.data());
    return r;
  }

  static Element exp(const Element& a, const Scalar& s) {
    Element r;
    // libsodium signals an identity result with -1 and a zeroed output;
    // inputs are canonical by construction so that is the only failure.
    if (crypto_scalarmult_ristretto255(r.enc.data(), s.le.data(), a.enc.data()) != 0) {
      return identity();
    }
    return r;
  }

  static Element exp_base(const Scalar& s) {
    Element r;
    if (crypto_scalarmult_ristretto255_base(r.enc.data(), s.le.data()) != 0) return identity();
    return r;
  }

  static Bytes encode(const Element& e) { return Bytes(e.enc.begin(), e.enc.end()); }

  static std::optional<Element> decode(ByteView b) {
    if (b.size() != 32) return std::nullopt;
    Element e;
    std::copy(b.begin(), b.end(), e.enc.begin());
    if (e == identity()) return e;
    if (!crypto_core_ristretto255_is_valid_point(e.enc.data())) return std::nullopt;
    return e;
  }

  static Scalar scalar(std::uint64_t n) {
    Scalar s;
    for (int i = 0; i < 8; ++i) s.le[i] = static_cast<std::uint8_t>(n >> (8 * i));
    return s;
  }

  static Scalar random_scalar(Rng& rng) {
    std::array<std::uint8_t, 64> wide{};
    rng.fill(wide);
    Scalar s;
    crypto_core_ristretto255_scalar_reduce(s.le.data(), wide.data());
    return s;
  }

  static Scalar scalar_from_digest(const Digest& d) {
    std::array<std::uint8_t, 64> wide{};
    std::reverse_copy(d.bytes.begin(), d.bytes.end(), wide.begin());
    Scalar s;
    crypto_core_ristretto255_scalar_reduce(s.le.data(), wide.data());
    return s;
  }

  static std::array<std::uint8_t, 32> encode_scalar(const Scalar& s) {
    std::array<std::uint8_t, 32> be{};
    std::reverse_copy(s.le.begin(), s.le.end(), be.begin());
    return be;
  }

  static std::optional<Scalar> decode_scalar(ByteView b) {
    if (b.size() != 32) return std::nullopt;
    Digest d;
    std::copy(b.begin(), b.end(), d.bytes.begin());
    Scalar s = scalar_from_digest(d);
    if (encode_scalar(s) != d.bytes) return std::nullopt;
    return s;
  }
};

static_assert(PrimeOrderGroup<Ristretto255>);

}  // namespace dragoon
