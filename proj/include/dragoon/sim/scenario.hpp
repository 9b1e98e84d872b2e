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

#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "dragoon/clients.hpp"
#include "dragoon/sim/scheduler.hpp"

namespace dragoon::sim {

inline constexpr int kScenarioVersion = 1;
inline constexpr std::uint64_t kDefaultTimeout = 64;

inline const std::set<std::string>& worker_strategies() {
  static const std::set<std::string> s{"honest",  "silent",      "no-reveal",    "bad-reveal",
                                       "verbatim", "copy-commit", "replay-reveal"};
  return s;
}

inline const std::set<std::string>& requester_strategies() {
  static const std::set<std::string> s{"honest",       "withhold-golden", "bad-golden-key",
                                       "false-reject", "false-outrange",  "silent-evaluate"};
  return s;
}

struct WorkerSpec {
  PartyId id;
  AnswerVector answers;
  std::string strategy = "honest";
  std::string target;  // victim for copy-commit / replay-reveal
  Coins balance = 0;

  bool honest() const { return strategy == "honest"; }
};

struct RequesterSpec {
  PartyId id{"requester"};
  std::string strategy = "honest";
  Coins balance = 0;
  std::string secret_key_hex;  // empty: derive from the scenario seed

  bool honest() const { return strategy == "honest"; }
};

struct Scenario {
  int version = kScenarioVersion;
  std::string name;
  std::uint64_t seed = 0;
  std::uint64_t timeout = kDefaultTimeout;
  TaskSpec task;
  RequesterSpec requester;
  std::vector<WorkerSpec> workers;
  SchedulerSpec scheduler;

  std::set<PartyId> honest_parties() const {
    std::set<PartyId> out;
    if (requester.honest()) out.insert(requester.id);
    for (const auto& w : workers) {
      if (w.honest()) out.insert(w.id);
    }
    return out;
  }

  const WorkerSpec* worker(const PartyId& id) const {
    for (const auto& w : workers) {
      if (w.id == id) return &w;
    }
    return nullptr;
  }

  /// Empty when the scenario can be run.
  std::string validate() const {
    if (version != kScenarioVersion) return "unsupported scenario version";
    if (timeout == 0) return "timeout must be positive";
    if (task.k == 0) return "K must be positive";
    if (task.n == 0) return "N must be positive";
    if (task.budget % task.k != 0) return "budget not divisible by K";
    if (task.threshold > task.goldens.size()) return "threshold exceeds golden count";
    if (auto err = task.goldens.validate(task.n, task.range); !err.empty()) return "goldens: " + err;
    if (!requester_strategies().contains(requester.strategy)) {
      return "unknown requester strategy: " + requester.strategy;
    }
    if (requester.id.name.empty() || requester.id.name == "contract" ||
        requester.id.name == "ledger") {
      return "reserved or empty requester id";
    }
    std::set<std::string> ids{requester.id.name};
    for (const auto& w : workers) {
      if (w.id.name.empty() || w.id.name == "contract" || w.id.name == "ledger") {
        return "reserved or empty worker id";
      }
      if (!ids.insert(w.id.name).second) return "duplicate party id: " + w.id.name;
      if (!worker_strategies().contains(w.strategy)) return "unknown worker strategy: " + w.strategy;
      if (w.answers.size() != task.n) return w.id.name + ": answer vector length != N";
      if (w.honest()) {
        for (auto a : w.answers) {
          if (!task.range.contains(a)) return w.id.name + ": honest answer outside range";
        }
      }
      if (w.strategy == "copy-commit" || w.strategy == "replay-reveal") {
        if (w.target.empty() || w.target == w.id.name) return w.id.name + ": needs a victim";
      }
    }
    for (const auto& w : workers) {
      if (!w.target.empty() && !ids.contains(w.target)) return w.id.name + ": unknown victim";
    }
    const auto& names = scheduler_names();
    if (std::find(names.begin(), names.end(), scheduler.strategy) == names.end()) {
      return "unknown scheduler strategy: " + scheduler.strategy;
    }
    if (scheduler.strategy == "target-exclude" && !ids.contains(scheduler.target)) {
      return "scheduler target is not a party";
    }
    if (!requester.secret_key_hex.empty()) {
      auto b = from_hex(requester.secret_key_hex);
      if (!b || b->size() != 32) return "secret_key must be 64 hex digits";
    }
    return {};
  }
};

class ScenarioError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

using json = nlohmann::json;

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
  return j.contains(key) ? j.at(key).get<T>() : fallback;
}

// Either an explicit list, or {"default", "correct_goldens", "overrides"}:
// the first `correct_goldens` golden positions get their solution, the rest
// of the goldens get a wrong in-range value, then overrides apply.
inline AnswerVector parse_answers(const json& j, const TaskSpec& task) {
  if (j.is_array()) return j.get<AnswerVector>();
  AnswerVector a(task.n, get_or<Plaintext>(j, "default", task.range.low()));
  const auto correct = get_or<std::size_t>(j, "correct_goldens", task.goldens.size());
  for (std::size_t i = 0; i < task.goldens.size(); ++i) {
    const auto s = task.goldens.solutions[i];
    Plaintext wrong = s == task.range.high() ? task.range.low() : s + 1;
    a[task.goldens.indices[i] - 1] = i < correct ? s : wrong;
  }
  if (j.contains("overrides")) {
    for (const auto& [k, v] : j.at("overrides").items()) {
      const auto idx = std::stoul(k);
      if (idx < 1 || idx > task.n) throw ScenarioError("override index out of range: " + k);
      a[idx - 1] = v.get<Plaintext>();
    }
  }
  return a;
}

}  // namespace detail

/// Parses and validates. Throws ScenarioError with a readable message.
inline Scenario parse_scenario(const nlohmann::json& j) {
  using detail::get_or;
  Scenario sc;
  try {
    sc.version = j.at("version").get<int>();
    if (sc.version != kScenarioVersion) throw ScenarioError("unsupported scenario version");
    sc.name = get_or<std::string>(j, "name", "");
    sc.seed = get_or<std::uint64_t>(j, "seed", 0);
    sc.timeout = get_or<std::uint64_t>(j, "timeout", kDefaultTimeout);

    const auto& t = j.at("task");
    sc.task.n = t.at("N").get<std::uint32_t>();
    sc.task.budget = t.at("budget").get<Coins>();
    sc.task.k = t.at("K").get<std::uint32_t>();
    const auto range = t.at("range").get<std::vector<Plaintext>>();
    if (range.size() != 2) throw ScenarioError("range must be [low, high]");
    sc.task.range = AnswerRange(range[0], range[1]);
    sc.task.threshold = t.at("threshold").get<std::uint32_t>();
    const auto& g = t.at("goldens");
    sc.task.goldens = GoldenSet{g.at("indices").get<std::vector<std::uint32_t>>(),
                                g.at("solutions").get<std::vector<Plaintext>>()};

    const auto& r = j.at("requester");
    sc.requester.id = PartyId{get_or<std::string>(r, "id", "requester")};
    sc.requester.strategy = get_or<std::string>(r, "strategy", "honest");
    sc.requester.balance = r.at("balance").get<Coins>();
    sc.requester.secret_key_hex = get_or<std::string>(r, "secret_key", "");

    for (const auto& w : j.at("workers")) {
      WorkerSpec ws;
      ws.id = PartyId{w.at("id").get<std::string>()};
      ws.answers = detail::parse_answers(w.at("answers"), sc.task);
      ws.strategy = get_or<std::string>(w, "strategy", "honest");
      ws.target = get_or<std::string>(w, "target", "");
      ws.balance = get_or<Coins>(w, "balance", 0);
      sc.workers.push_back(std::move(ws));
    }

    if (j.contains("scheduler")) {
      const auto& s = j.at("scheduler");
      sc.scheduler.strategy = get_or<std::string>(s, "strategy", "fifo");
      sc.scheduler.seed = get_or<std::uint64_t>(s, "seed", 0);
      sc.scheduler.target = get_or<std::string>(s, "target", "");
      sc.scheduler.priority = get_or<std::vector<std::string>>(s, "priority", {});
    }
  } catch (const ScenarioError&) {
    throw;
  } catch (const std::exception& e) {
    throw ScenarioError(std::string("malformed scenario: ") + e.what());
  }
  if (auto err = sc.validate(); !err.empty()) throw ScenarioError(err);
  return sc;
}

inline Scenario parse_scenario_text(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ScenarioError(std::string("scenario is not valid JSON: ") + e.what());
  }
  return parse_scenario(j);
}

inline Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scenario_text(ss.str());
}

/// Canonical form; parse_scenario(to_json(sc)) reproduces sc.
inline nlohmann::ordered_json to_json(const Scenario& sc) {
  nlohmann::ordered_json j;
  j["version"] = sc.version;
  j["name"] = sc.name;
  j["seed"] = sc.seed;
  j["timeout"] = sc.timeout;
  j["task"] = {{"N", sc.task.n},
               {"budget", sc.task.budget},
               {"K", sc.task.k},
               {"range", {sc.task.range.low(), sc.task.range.high()}},
               {"threshold", sc.task.threshold},
               {"goldens",
                {{"indices", sc.task.goldens.indices}, {"solutions", sc.task.goldens.solutions}}}};
  j["requester"] = {{"id", sc.requester.id.name},
                    {"strategy", sc.requester.strategy},
                    {"balance", sc.requester.balance}};
  if (!sc.requester.secret_key_hex.empty()) j["requester"]["secret_key"] = sc.requester.secret_key_hex;
  j["workers"] = nlohmann::ordered_json::array();
  for (const auto& w : sc.workers) {
    nlohmann::ordered_json o{{"id", w.id.name}, {"strategy", w.strategy}};
    if (!w.target.empty()) o["target"] = w.target;
    if (w.balance) o["balance"] = w.balance;
    o["answers"] = w.answers;
    j["workers"].push_back(std::move(o));
  }
  j["scheduler"] = {{"strategy", sc.scheduler.strategy}, {"seed", sc.scheduler.seed}};
  if (!sc.scheduler.target.empty()) j["scheduler"]["target"] = sc.scheduler.target;
  if (!sc.scheduler.priority.empty()) j["scheduler"]["priority"] = sc.scheduler.priority;
  return j;
}

}  // namespace dragoon::sim
