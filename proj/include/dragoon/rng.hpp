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

#include <array>
#include <cstdint>
#include <cstring>
#include <limits>
#include <span>
#include <stdexcept>
#include <string_view>

#include "dragoon/hash.hpp"

namespace dragoon {

inline void ensure_sodium() {
  static const bool ready = [] {
    if (sodium_init() < 0) throw std::runtime_error("libsodium init failed");
    return true;
  }();
  (void)ready;
}

/// Deterministic ChaCha20 keystream generator.
///
/// All randomness in the library (keys, encryption coins, proof nonces,
/// scheduler choices) is drawn from an injected Rng, so a run is a pure
/// function of its seeds. Satisfies UniformRandomBitGenerator.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed) {
    ByteWriter w;
    w.field(as_bytes("dragoon.rng")).u64(seed);
    init(hash(w.bytes()));
  }

  explicit Rng(const Digest& key) { init(key); }

  /// Independent child stream bound to a label.
  Rng fork(std::string_view label) {
    ByteWriter w;
    std::array<std::uint8_t, 32> salt{};
    fill(salt);
    w.field(salt).field(as_bytes(label));
    return Rng(hash(w.bytes()));
  }

  void fill(std::span<std::uint8_t> out) {
    std::size_t off = 0;
    while (off < out.size()) {
      if (pos_ == block_.size()) refill();
      std::size_t n = std::min(out.size() - off, block_.size() - pos_);
      std::memcpy(out.data() + off, block_.data() + pos_, n);
      pos_ += n;
      off += n;
    }
  }

  result_type operator()() {
    std::array<std::uint8_t, 8> b{};
    fill(b);
    result_type v = 0;
    for (auto x : b) v = (v << 8) | x;
    return v;
  }

  /// Uniform integer in [0, bound).
  std::uint64_t below(std::uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("Rng::below(0)");
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % bound;
    for (;;) {
      auto v = (*this)();
      if (v < limit) return v % bound;
    }
  }

  bool coin(double p = 0.5) {
    return static_cast<double>((*this)() >> 11) * 0x1.0p-53 < p;
  }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

 private:
  void init(const Digest& key) {
    ensure_sodium();
    key_ = key.bytes;
    pos_ = block_.size();
  }

  void refill() {
    std::array<std::uint8_t, crypto_stream_chacha20_ietf_NONCEBYTES> nonce{};
    std::uint64_t n = counter_++;
    for (int i = 0; i < 8; ++i) nonce[i] = static_cast<std::uint8_t>(n >> (8 * i));
    crypto_stream_chacha20_ietf(block_.data(), block_.size(), nonce.data(), key_.data());
    pos_ = 0;
  }

  std::array<std::uint8_t, 32> key_{};
  std::array<std::uint8_t, 256> block_{};
  std::size_t pos_ = 0;
  std::uint64_t counter_ = 0;
};

}  // namespace dragoon
