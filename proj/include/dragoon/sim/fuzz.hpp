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
#include <string>
#include <vector>

#include "dragoon/sim/scenario.hpp"

namespace dragoon::sim {

namespace detail {

inline AnswerVector random_answers(Rng& rng, const TaskSpec& t, bool allow_outside) {
  AnswerVector a(t.n);
  for (auto& x : a) x = t.range.low() + static_cast<Plaintext>(rng.below(t.range.size()));
  // Bias toward the goldens so both sides of the threshold show up.
  for (std::size_t j = 0; j < t.goldens.size(); ++j) {
    if (rng.coin(0.6)) a[t.goldens.indices[j] - 1] = t.goldens.solutions[j];
  }
  if (allow_outside && rng.coin(0.5)) {
    a[rng.below(t.n)] = t.range.high() + 1 + static_cast<Plaintext>(rng.below(5));
  }
  return a;
}

inline GoldenSet random_goldens(Rng& rng, std::uint32_t n, const AnswerRange& range, std::size_t count) {
  std::vector<std::uint32_t> all(n);
  for (std::uint32_t i = 0; i < n; ++i) all[i] = i + 1;
  std::shuffle(all.begin(), all.end(), rng);
  GoldenSet g;
  g.indices.assign(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(count));
  std::sort(g.indices.begin(), g.indices.end());
  for (std::size_t i = 0; i < count; ++i) {
    g.solutions.push_back(range.low() + static_cast<Plaintext>(rng.below(range.size())));
  }
  return g;
}

}  // namespace detail

/// Randomized scenario for the equivalence sweep: task shape, corruption
/// set, strategies and scheduler all drawn from the seed. At least K
/// workers send distinct commitments, so every run terminates.
inline Scenario random_scenario(std::uint64_t seed) {
  Rng rng(seed);
  Scenario sc;
  sc.seed = seed;
  sc.name = "fuzz-" + std::to_string(seed);
  auto& t = sc.task;
  t.n = 6 + static_cast<std::uint32_t>(rng.below(19));
  t.range = rng.coin(0.6) ? AnswerRange(0, 1) : AnswerRange(0, 2 + static_cast<Plaintext>(rng.below(4)));
  t.goldens = detail::random_goldens(rng, t.n, t.range, 1 + rng.below(std::min<std::uint32_t>(6, t.n)));
  t.threshold = static_cast<std::uint32_t>(rng.below(t.goldens.size() + 1));
  t.k = 1 + static_cast<std::uint32_t>(rng.below(4));
  t.budget = t.k * (1 + rng.below(50));

  sc.requester.balance = t.budget + rng.below(100);
  if (rng.coin(0.3)) {
    std::vector<std::string> corrupt;
    for (const auto& x : requester_strategies()) {
      if (x != "honest") corrupt.push_back(x);
    }
    sc.requester.strategy = corrupt[rng.below(corrupt.size())];
  }

  const std::size_t m = t.k + rng.below(4);
  // The first K workers are guaranteed committers.
  const std::vector<std::string> committing{"no-reveal", "bad-reveal", "verbatim", "replay-reveal"};
  const std::vector<std::string> any{"silent", "no-reveal", "bad-reveal", "verbatim", "replay-reveal",
                                     "copy-commit"};
  for (std::size_t i = 0; i < m; ++i) {
    WorkerSpec w;
    w.id = PartyId{"w" + std::to_string(i + 1)};
    if (rng.coin(0.3)) {
      const auto& pool = i < t.k ? committing : any;
      w.strategy = pool[rng.below(pool.size())];
    }
    w.answers = detail::random_answers(rng, t, w.strategy == "verbatim");
    sc.workers.push_back(std::move(w));
  }
  // Victims are drawn among workers that do commit on their own.
  std::vector<std::string> committers;
  for (const auto& w : sc.workers) {
    if (w.strategy != "silent" && w.strategy != "copy-commit") committers.push_back(w.id.name);
  }
  for (auto& w : sc.workers) {
    if (w.strategy != "copy-commit" && w.strategy != "replay-reveal") continue;
    std::vector<std::string> options;
    for (const auto& c : committers) {
      if (c != w.id.name) options.push_back(c);
    }
    if (options.empty()) {
      w.strategy = "verbatim";
    } else {
      w.target = options[rng.below(options.size())];
    }
  }

  const std::vector<std::string> schedulers{"fifo", "reverse", "random", "target-exclude", "defer-max"};
  sc.scheduler.strategy = schedulers[rng.below(schedulers.size())];
  sc.scheduler.seed = rng();
  if (sc.scheduler.strategy == "target-exclude") {
    sc.scheduler.target = sc.workers[rng.below(sc.workers.size())].id.name;
  }
  return sc;
}

/// Twenty scripted commitment-copy, ciphertext-replay and
/// reorder-to-exclude attacks. The attacker is always "mallory"; honest
/// workers are "alice", "bob", "carol".
inline std::vector<Scenario> copy_paste_suite() {
  std::vector<Scenario> out;
  const std::vector<std::string> schedules{"fifo", "reverse", "random", "target-exclude", "priority"};
  const std::vector<std::string> attacks{"copy-commit", "replay-reveal"};
  for (std::uint64_t i = 0; i < 20; ++i) {
    Scenario sc;
    sc.seed = 1000 + i;
    sc.name = "copy-paste-" + std::to_string(i + 1);
    auto& t = sc.task;
    t.n = 10;
    t.range = AnswerRange(0, 1);
    t.goldens = GoldenSet{{2, 5, 9}, {1, 0, 1}};
    t.threshold = 2;
    t.k = i % 4 < 2 ? 2 : 3;
    t.budget = 30 * t.k;
    sc.requester.balance = 500;

    const AnswerVector good{0, 1, 0, 0, 0, 1, 1, 0, 1, 0};  // all goldens right
    const AnswerVector weak{0, 0, 0, 0, 1, 1, 1, 0, 1, 0};  // one golden right
    sc.workers.push_back({{"alice"}, good, "honest", {}, 0});
    sc.workers.push_back({{"bob"}, i % 3 == 2 ? weak : good, "honest", {}, 0});
    if (t.k == 3) sc.workers.push_back({{"carol"}, good, "honest", {}, 0});
    const std::string victim = i % 2 ? "bob" : "alice";
    sc.workers.push_back({{"mallory"}, good, attacks[(i / 5) % 2], victim, 0});

    sc.scheduler.strategy = schedules[i % schedules.size()];
    sc.scheduler.seed = 77 + i;
    if (sc.scheduler.strategy == "target-exclude") sc.scheduler.target = victim;
    if (sc.scheduler.strategy == "priority") sc.scheduler.priority = {"mallory", victim};
    out.push_back(std::move(sc));
  }
  return out;
}

/// ImageNet-shaped task with four workers: "honest", "unqualified" (one
/// worker with quality 3) or "withhold" (requester keeps the goldens).
inline Scenario imagenet_scenario(const std::string& variant) {
  Scenario sc;
  sc.name = "imagenet-" + variant;
  sc.seed = 106;
  auto& t = sc.task;
  t.n = 106;
  t.budget = 400;
  t.k = 4;
  t.range = AnswerRange(0, 1);
  t.threshold = 4;
  t.goldens = GoldenSet{{7, 19, 40, 58, 77, 101}, {1, 0, 1, 1, 0, 1}};
  sc.requester.balance = 1000;
  if (variant == "withhold") sc.requester.strategy = "withhold-golden";
  const std::vector<std::size_t> correct =
      variant == "unqualified" ? std::vector<std::size_t>{6, 5, 4, 3} : std::vector<std::size_t>{6, 5, 4, 6};
  for (std::size_t i = 0; i < 4; ++i) {
    WorkerSpec w;
    w.id = PartyId{"worker" + std::to_string(i + 1)};
    w.answers.assign(t.n, 0);
    for (std::size_t j = 0; j < t.n; ++j) w.answers[j] = static_cast<Plaintext>((j * 7 + i) % 3 == 0);
    for (std::size_t j = 0; j < t.goldens.size(); ++j) {
      const auto s = t.goldens.solutions[j];
      w.answers[t.goldens.indices[j] - 1] = j < correct[i] ? s : 1 - s;
    }
    sc.workers.push_back(std::move(w));
  }
  return sc;
}

}  // namespace dragoon::sim
