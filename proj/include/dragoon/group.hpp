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

#include <concepts>
#include <cstdint>
#include <optional>

#include "dragoon/bytes.hpp"
#include "dragoon/hash.hpp"
#include "dragoon/rng.hpp"

namespace dragoon {

/// Interface every group backend provides: a cyclic group of prime order p
/// with fixed generator g, written multiplicatively, and its scalar field.
///
/// Scalars serialize to exactly 32 big-endian bytes. Elements serialize to
/// a backend-defined canonical form; decode() rejects anything else.
template <class G>
concept PrimeOrderGroup = requires(const typename G::Scalar& s, const typename G::Element& e,
                                   ByteView bytes, Rng& rng, const Digest& digest,
                                   std::uint64_t n) {
  { G::name } -> std::convertible_to<std::string_view>;
  { G::generator() } -> std::same_as<typename G::Element>;
  { G::identity() } -> std::same_as<typename G::Element>;
  { G::mul(e, e) } -> std::same_as<typename G::Element>;
  { G::inv(e) } -> std::same_as<typename G::Element>;
  { G::exp(e, s) } -> std::same_as<typename G::Element>;
  { G::exp_base(s) } -> std::same_as<typename G::Element>;
  { G::encode(e) } -> std::same_as<Bytes>;
  { G::decode(bytes) } -> std::same_as<std::optional<typename G::Element>>;
  { G::scalar(n) } -> std::same_as<typename G::Scalar>;
  { G::random_scalar(rng) } -> std::same_as<typename G::Scalar>;
  { G::scalar_from_digest(digest) } -> std::same_as<typename G::Scalar>;
  { G::encode_scalar(s) } -> std::same_as<std::array<std::uint8_t, 32>>;
  { G::decode_scalar(bytes) } -> std::same_as<std::optional<typename G::Scalar>>;
  { s + s } -> std::same_as<typename G::Scalar>;
  { s - s } -> std::same_as<typename G::Scalar>;
  { s * s } -> std::same_as<typename G::Scalar>;
  { -s } -> std::same_as<typename G::Scalar>;
  { s == s } -> std::same_as<bool>;
  { e == e } -> std::same_as<bool>;
};

/// Interprets H(data) as a big-endian integer and reduces it modulo p.
template <PrimeOrderGroup G>
typename G::Scalar hash_to_scalar(ByteView data) {
  return G::scalar_from_digest(hash(data));
}

}  // namespace dragoon
