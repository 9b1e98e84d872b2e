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
#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "dragoon/poqoea.hpp"
#include "dragoon/ristretto255.hpp"

namespace dragoon {

struct BenchRow {
  std::string op;
  std::size_t reps = 0;
  double median_ms = 0;
  double min_ms = 0;
  double max_ms = 0;
};

template <typename F>
BenchRow time_op(std::string op, std::size_t reps, F&& f) {
  std::vector<double> ms;
  ms.reserve(reps);
  for (std::size_t i = 0; i < reps; ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    f(i);
    const auto t1 = std::chrono::steady_clock::now();
    ms.push_back(std::chrono::duration<double, std::milli>(t1 - t0).count());
  }
  std::sort(ms.begin(), ms.end());
  return {std::move(op), reps, ms[ms.size() / 2], ms.front(), ms.back()};
}

/// Desk-scale ceilings on the median, in milliseconds.
struct BenchLimit {
  std::string_view op;
  double ms;
};
inline constexpr BenchLimit kBenchLimits[] = {
    {"prove_pke", 30}, {"prove_quality", 100}, {"verify_quality", 50}};

struct BenchShape {
  std::uint32_t n = 106;
  AnswerRange range{0, 1};
  GoldenSet goldens{{7, 19, 40, 58, 77, 101}, {1, 0, 1, 1, 0, 1}};
};

/// Times the requester-side proofs and the contract-side checks on a
/// worst-case answer (every golden wrong, so the quality proof carries one
/// decryption proof per golden).
inline std::vector<BenchRow> run_benchmarks(std::size_t reps, std::uint64_t seed = 1,
                                            const BenchShape& shape = {}) {
  using G = Ristretto255;
  Rng rng(seed);
  const auto kp = KeyPair<G>::generate(rng);
  const DecryptionTable<G> table(shape.range);
  AnswerVector a(shape.n, shape.range.low());
  for (std::size_t j = 0; j < shape.goldens.size(); ++j) {
    const auto s = shape.goldens.solutions[j];
    a[shape.goldens.indices[j] - 1] = s == shape.range.low() ? shape.range.high() : shape.range.low();
  }
  EncryptedAnswer<G> c;
  for (auto x : a) c.items.push_back(encrypt<G>(x, kp.pub, rng));

  std::vector<BenchRow> rows;
  rows.push_back(time_op("encrypt_answer", reps, [&](std::size_t) {
    EncryptedAnswer<G> e;
    for (auto x : a) e.items.push_back(encrypt<G>(x, kp.pub, rng));
  }));
  const auto pke = prove_decryption(kp.secret, c.items[0], table, rng);
  rows.push_back(time_op("prove_pke", reps, [&](std::size_t) {
    prove_decryption(kp.secret, c.items[0], table, rng);
  }));
  rows.push_back(time_op("verify_pke", reps, [&](std::size_t) {
    if (!verify_decryption(kp.pub, pke.result, c.items[0], pke.proof, table)) throw std::logic_error("bench");
  }));
  const auto q = prove_quality(kp.secret, c, shape.goldens, table, rng);
  rows.push_back(time_op("prove_quality", reps, [&](std::size_t) {
    prove_quality(kp.secret, c, shape.goldens, table, rng);
  }));
  rows.push_back(time_op("verify_quality", reps, [&](std::size_t) {
    if (!verify_quality(kp.pub, c, q.chi, q.proof, shape.goldens, table)) throw std::logic_error("bench");
  }));
  return rows;
}

inline std::string format_bench(const std::vector<BenchRow>& rows) {
  std::string out;
  char buf[160];
  std::snprintf(buf, sizeof buf, "%-16s %6s %12s %12s %12s\n", "operation", "reps", "median_ms", "min_ms",
                "max_ms");
  out += buf;
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%-16s %6zu %12.3f %12.3f %12.3f\n", r.op.c_str(), r.reps, r.median_ms,
                  r.min_ms, r.max_ms);
    out += buf;
  }
  return out;
}

}  // namespace dragoon
