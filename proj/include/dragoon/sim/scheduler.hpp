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
#include <memory>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "dragoon/audit.hpp"
#include "dragoon/rng.hpp"

namespace dragoon::sim {

/// What the adversary sees of an undelivered message when ordering a batch.
struct PendingMeta {
  PartyId sender;
  std::string kind;
  std::uint64_t sent;
  std::uint64_t seq;
  bool deferrable;  // false once a message has already been held back
};

/// Indices into the pending batch: delivered ones in delivery order, plus
/// the ones held until the next boundary. Together a partition.
struct Schedule {
  std::vector<std::size_t> order;
  std::vector<std::size_t> deferred;
};

class Scheduler {
 public:
  virtual ~Scheduler() = default;
  virtual std::string name() const = 0;
  virtual Schedule schedule(std::uint64_t clock, const std::vector<PendingMeta>& pending) = 0;
};

struct SchedulerSpec {
  std::string strategy = "fifo";
  std::uint64_t seed = 0;
  std::string target;                 // target-exclude
  std::vector<std::string> priority;  // priority: senders in delivery order
};

inline std::vector<std::size_t> iota_indices(std::size_t n) {
  std::vector<std::size_t> v(n);
  std::iota(v.begin(), v.end(), std::size_t{0});
  return v;
}

class FifoScheduler : public Scheduler {
 public:
  std::string name() const override { return "fifo"; }
  Schedule schedule(std::uint64_t, const std::vector<PendingMeta>& pending) override {
    return {iota_indices(pending.size()), {}};
  }
};

class ReverseScheduler : public Scheduler {
 public:
  std::string name() const override { return "reverse"; }
  Schedule schedule(std::uint64_t, const std::vector<PendingMeta>& pending) override {
    auto v = iota_indices(pending.size());
    std::reverse(v.begin(), v.end());
    return {v, {}};
  }
};

/// Uniform shuffle, with each deferrable message held back w.p. 1/4. The
/// choice depends only on (seed, clock, batch shape).
class RandomScheduler : public Scheduler {
 public:
  explicit RandomScheduler(std::uint64_t seed) : seed_(seed) {}
  std::string name() const override { return "random"; }

  Schedule schedule(std::uint64_t clock, const std::vector<PendingMeta>& pending) override {
    ByteWriter w;
    w.field(as_bytes("dragoon.scheduler")).u64(seed_).u64(clock);
    Rng rng(hash(w.bytes()));
    Schedule s;
    for (std::size_t i = 0; i < pending.size(); ++i) {
      if (pending[i].deferrable && rng.below(4) == 0) {
        s.deferred.push_back(i);
      } else {
        s.order.push_back(i);
      }
    }
    std::shuffle(s.order.begin(), s.order.end(), rng);
    return s;
  }

 private:
  std::uint64_t seed_;
};

/// Delays and back-orders everything the target sends.
class TargetExcludeScheduler : public Scheduler {
 public:
  explicit TargetExcludeScheduler(std::string target) : target_(std::move(target)) {}
  std::string name() const override { return "target-exclude"; }

  Schedule schedule(std::uint64_t, const std::vector<PendingMeta>& pending) override {
    Schedule s;
    std::vector<std::size_t> tail;
    for (std::size_t i = 0; i < pending.size(); ++i) {
      if (pending[i].sender.name != target_) {
        s.order.push_back(i);
      } else if (pending[i].deferrable) {
        s.deferred.push_back(i);
      } else {
        tail.push_back(i);
      }
    }
    s.order.insert(s.order.end(), tail.begin(), tail.end());
    return s;
  }

 private:
  std::string target_;
};

class DeferMaxScheduler : public Scheduler {
 public:
  std::string name() const override { return "defer-max"; }
  Schedule schedule(std::uint64_t, const std::vector<PendingMeta>& pending) override {
    Schedule s;
    for (std::size_t i = 0; i < pending.size(); ++i) {
      (pending[i].deferrable ? s.deferred : s.order).push_back(i);
    }
    return s;
  }
};

/// Stable sort by the sender's position in a fixed list; unlisted senders
/// go last. Used to script exact orderings.
class PriorityScheduler : public Scheduler {
 public:
  explicit PriorityScheduler(std::vector<std::string> priority) : priority_(std::move(priority)) {}
  std::string name() const override { return "priority"; }

  Schedule schedule(std::uint64_t, const std::vector<PendingMeta>& pending) override {
    auto rank = [&](std::size_t i) {
      auto it = std::find(priority_.begin(), priority_.end(), pending[i].sender.name);
      return static_cast<std::size_t>(it - priority_.begin());
    };
    auto v = iota_indices(pending.size());
    std::stable_sort(v.begin(), v.end(), [&](auto a, auto b) { return rank(a) < rank(b); });
    return {v, {}};
  }

 private:
  std::vector<std::string> priority_;
};

inline const std::vector<std::string>& scheduler_names() {
  static const std::vector<std::string> names{"fifo",      "reverse",   "random",
                                              "target-exclude", "defer-max", "priority"};
  return names;
}

inline std::unique_ptr<Scheduler> make_scheduler(const SchedulerSpec& spec) {
  if (spec.strategy == "fifo") return std::make_unique<FifoScheduler>();
  if (spec.strategy == "reverse") return std::make_unique<ReverseScheduler>();
  if (spec.strategy == "random") return std::make_unique<RandomScheduler>(spec.seed);
  if (spec.strategy == "target-exclude") return std::make_unique<TargetExcludeScheduler>(spec.target);
  if (spec.strategy == "defer-max") return std::make_unique<DeferMaxScheduler>();
  if (spec.strategy == "priority") return std::make_unique<PriorityScheduler>(spec.priority);
  throw std::invalid_argument("unknown scheduler strategy: " + spec.strategy);
}

}  // namespace dragoon::sim
