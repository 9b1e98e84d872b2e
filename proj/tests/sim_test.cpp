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

#include <algorithm>
#include <map>
#include <set>

#include "dragoon/sim.hpp"
#include "gtest/gtest.h"

namespace dragoon::sim {
namespace {

using R = Ristretto255;

PartyId id(const char* s) { return {s}; }

Scenario small_scenario() {
  Scenario sc;
  sc.name = "small";
  sc.seed = 5;
  sc.task.n = 8;
  sc.task.budget = 60;
  sc.task.k = 2;
  sc.task.range = AnswerRange(0, 1);
  sc.task.threshold = 2;
  sc.task.goldens = GoldenSet{{2, 5, 7}, {1, 0, 1}};
  sc.requester.balance = 100;
  const AnswerVector good{0, 1, 0, 0, 0, 0, 1, 0};
  sc.workers.push_back({id("alice"), good, "honest", {}, 0});
  sc.workers.push_back({id("bob"), good, "honest", {}, 0});
  return sc;
}

TEST(SchedulerTest, BuiltinsProducePartitions) {
  std::vector<PendingMeta> batch;
  for (std::uint64_t i = 0; i < 9; ++i) {
    batch.push_back({{"p" + std::to_string(i % 3)}, "commit", 1, i, i % 2 == 0});
  }
  for (const auto& name : scheduler_names()) {
    SchedulerSpec spec{name, 3, "p1", {"p2", "p0"}};
    auto s = make_scheduler(spec);
    for (std::uint64_t clock = 1; clock < 20; ++clock) {
      auto out = s->schedule(clock, batch);
      std::vector<std::size_t> all = out.order;
      all.insert(all.end(), out.deferred.begin(), out.deferred.end());
      std::sort(all.begin(), all.end());
      EXPECT_EQ(all, iota_indices(batch.size())) << name;
      for (auto d : out.deferred) EXPECT_TRUE(batch[d].deferrable) << name;
    }
  }
  EXPECT_THROW(make_scheduler({"chaos", 0, {}, {}}), std::invalid_argument);
}

class BrokenScheduler : public Scheduler {
 public:
  explicit BrokenScheduler(int mode) : mode_(mode) {}
  std::string name() const override { return "broken"; }
  Schedule schedule(std::uint64_t, const std::vector<PendingMeta>& pending) override {
    Schedule s{iota_indices(pending.size()), {}};
    if (mode_ == 0 && !s.order.empty()) s.order.pop_back();             // drop
    if (mode_ == 1 && !s.order.empty()) s.order.push_back(s.order[0]);  // duplicate
    if (mode_ == 2) std::swap(s.order, s.deferred);                     // defer forever
    if (mode_ == 3) s.order.push_back(pending.size());                  // invent
    return s;
  }

 private:
  int mode_;
};

TEST(NetworkTest, RejectsUnsoundSchedulers) {
  for (int mode = 0; mode < 4; ++mode) {
    Network<R> net;
    net.send(id("a"), CommitMsg{}, 0);
    net.send(id("b"), CommitMsg{}, 0);
    BrokenScheduler s(mode);
    auto attempt = [&] {
      net.deliver(1, s);
      net.deliver(2, s);
    };
    EXPECT_THROW(attempt(), std::logic_error) << mode;
  }
}

TEST(NetworkTest, DeliveryWithinOnePeriodOverRandomRuns) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    Network<R> net;
    auto s = make_scheduler({seed % 2 ? "random" : "defer-max", seed, {}, {}});
    Rng rng(seed);
    std::uint64_t clock = 0;
    for (; clock < 30; ++clock) {
      const auto burst = rng.below(4);
      for (std::uint64_t i = 0; i < burst; ++i) net.send({"p" + std::to_string(i)}, CommitMsg{}, clock);
      if (clock > 0) net.deliver(clock, *s);
    }
    net.deliver(clock, *s);
    net.deliver(clock + 1, *s);
    std::set<std::uint64_t> seqs;
    for (const auto& r : net.history()) {
      EXPECT_TRUE(seqs.insert(r.seq).second) << "duplicate delivery";
      EXPECT_GE(r.delivered, r.sent + 1);
      EXPECT_LE(r.delivered, r.sent + 2);
    }
    EXPECT_EQ(seqs.size(), net.sent_count());
    EXPECT_TRUE(net.in_flight().empty());
  }
}

TEST(ScenarioTest, JsonRoundTrip) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto sc = random_scenario(seed);
    const auto text = to_json(sc).dump();
    const auto back = parse_scenario_text(text);
    EXPECT_EQ(to_json(back).dump(), text);
  }
}

TEST(ScenarioTest, GeneratedAnswers) {
  const auto sc = parse_scenario_text(R"({
    "version": 1, "seed": 3,
    "task": {"N": 6, "budget": 10, "K": 1, "range": [0, 1], "threshold": 1,
             "goldens": {"indices": [2, 4], "solutions": [1, 1]}},
    "requester": {"balance": 10},
    "workers": [{"id": "w", "answers": {"correct_goldens": 1, "overrides": {"6": 1}}}]
  })");
  EXPECT_EQ(sc.workers[0].answers, (AnswerVector{0, 1, 0, 0, 0, 1}));
  EXPECT_EQ(sc.scheduler.strategy, "fifo");
  EXPECT_EQ(sc.timeout, kDefaultTimeout);
}

TEST(ScenarioTest, ValidationErrors) {
  auto expect_invalid = [](Scenario sc, const char* what) {
    EXPECT_FALSE(sc.validate().empty()) << what;
    EXPECT_THROW(run_real(sc), ScenarioError) << what;
  };
  auto sc = small_scenario();
  EXPECT_EQ(sc.validate(), "");
  { auto s = sc; s.version = 2; expect_invalid(s, "version"); }
  { auto s = sc; s.task.budget = 61; expect_invalid(s, "divisibility"); }
  { auto s = sc; s.task.threshold = 4; expect_invalid(s, "threshold"); }
  { auto s = sc; s.task.goldens.indices = {2, 2, 7}; expect_invalid(s, "goldens"); }
  { auto s = sc; s.workers[1].id = id("alice"); expect_invalid(s, "duplicate id"); }
  { auto s = sc; s.workers[0].answers.pop_back(); expect_invalid(s, "length"); }
  { auto s = sc; s.workers[0].answers[0] = 5; expect_invalid(s, "honest out of range"); }
  { auto s = sc; s.workers[0].strategy = "lazy"; expect_invalid(s, "strategy"); }
  { auto s = sc; s.workers[0].strategy = "copy-commit"; expect_invalid(s, "victim"); }
  { auto s = sc; s.requester.strategy = "greedy"; expect_invalid(s, "requester"); }
  { auto s = sc; s.scheduler.strategy = "target-exclude"; expect_invalid(s, "target"); }
  { auto s = sc; s.requester.secret_key_hex = "abcd"; expect_invalid(s, "key"); }
  EXPECT_THROW(parse_scenario_text("{"), ScenarioError);
  EXPECT_THROW(parse_scenario_text(R"({"version": 1})"), ScenarioError);

  auto s = sc;
  s.workers[0].answers[0] = 5;
  s.workers[0].strategy = "verbatim";
  EXPECT_EQ(s.validate(), "") << "corrupt workers may send anything";
}

TEST(ScenarioTest, BundledFilesMatchBuilders) {
  const std::string dir = std::string(DRAGOON_SOURCE_DIR) + "/scenarios/";
  for (const char* v : {"honest", "unqualified", "withhold"}) {
    const auto sc = load_scenario(dir + "imagenet_" + v + ".json");
    EXPECT_EQ(to_json(sc).dump(), to_json(imagenet_scenario(v)).dump()) << v;
  }
  const auto copy = load_scenario(dir + "copy_commit.json");
  const auto out = run_real(copy);
  ASSERT_TRUE(out.ok());
  EXPECT_EQ(out.balance(id("mallory")), 0u);
  EXPECT_EQ(out.balance(id("alice")), 0u) << "squeezed out by the copy";
  for (const auto& r : out.log.records()) {
    EXPECT_FALSE(r.actor == "alice" && r.kind == "send-reveal") << "an excluded worker reveals nothing";
  }
  EXPECT_EQ(out.balance(id("bob")), 30u);
  EXPECT_THROW(load_scenario(dir + "missing.json"), ScenarioError);
}

TEST(RunRealTest, DeterministicLogs) {
  for (std::uint64_t seed : {1, 2, 3, 76}) {
    const auto sc = random_scenario(seed);
    const auto a = run_real(sc), b = run_real(sc);
    EXPECT_EQ(a.log.dump(), b.log.dump());
    EXPECT_EQ(a.balances, b.balances);
    EXPECT_EQ(a.pre_golden_transcript, b.pre_golden_transcript);
  }
}

TEST(RunRealTest, ImageNetVariants) {
  const auto honest = run_real(imagenet_scenario("honest"));
  ASSERT_TRUE(honest.ok()) << honest.diagnostic;
  for (int i = 1; i <= 4; ++i) EXPECT_EQ(honest.balance({"worker" + std::to_string(i)}), 100u);
  EXPECT_EQ(honest.balance(id("requester")), 600u);
  EXPECT_EQ(honest.log.count("refund"), 0u);
  EXPECT_EQ(honest.message_counts.at("publish"), 1u);
  EXPECT_EQ(honest.message_counts.at("commit"), 4u);
  EXPECT_EQ(honest.message_counts.at("reveal"), 4u);
  EXPECT_EQ(honest.message_counts.at("golden"), 1u);
  EXPECT_FALSE(honest.message_counts.contains("evaluate"));

  const auto unq = run_real(imagenet_scenario("unqualified"));
  ASSERT_TRUE(unq.ok());
  EXPECT_EQ(unq.balance(id("worker4")), 0u);
  EXPECT_EQ(unq.balance(id("requester")), 700u);
  EXPECT_EQ(unq.verdicts[3].reason, "withheld-low-quality");
  EXPECT_EQ(unq.message_counts.at("evaluate"), 1u);

  const auto wh = run_real(imagenet_scenario("withhold"));
  ASSERT_TRUE(wh.ok());
  EXPECT_FALSE(wh.golden_opened);
  for (const auto& v : wh.verdicts) EXPECT_EQ(v.reason, "paid-no-golden");
  EXPECT_EQ(wh.balance(id("requester")), 600u);
}

TEST(RunRealTest, CopiedCommitmentExcluded) {
  auto sc = small_scenario();
  sc.workers.push_back({id("carol"), sc.workers[0].answers, "honest", {}, 0});
  sc.workers.push_back({id("mallory"), sc.workers[0].answers, "copy-commit", "alice", 0});
  sc.task.k = 3;
  sc.task.budget = 90;
  sc.scheduler = {"priority", 0, {}, {"alice", "mallory", "bob", "carol"}};
  const auto out = run_real(sc);
  ASSERT_TRUE(out.ok());
  EXPECT_EQ(out.entrants, (std::vector<PartyId>{id("alice"), id("bob"), id("carol")}));
  EXPECT_EQ(out.balance(id("mallory")), 0u);
  EXPECT_EQ(out.balance(id("alice")), 30u);
  EXPECT_EQ(out.log.count("commit-dropped"), 1u);
}

TEST(RunRealTest, CopyOnlyQuorumTimesOut) {
  auto sc = small_scenario();
  sc.workers.pop_back();
  sc.workers.push_back({id("mallory"), sc.workers[0].answers, "copy-commit", "alice", 0});
  sc.timeout = 10;
  const auto out = run_real(sc);
  EXPECT_TRUE(out.timed_out);
  EXPECT_FALSE(out.closed);
  EXPECT_NE(out.diagnostic.find("collect-commits"), std::string::npos) << out.diagnostic;
  EXPECT_EQ(out.balance(id("requester")), 40u) << "budget stays frozen";
  const auto ideal = run_ideal(sc);
  EXPECT_TRUE(ideal.timed_out);
  EXPECT_FALSE(compare(sc, out, ideal).equivalent());
}

TEST(IdealHitTest, PaymentRules) {
  Ledger ledger;
  ledger.deposit(id("r"), 100);
  IdealHit f(id("f"), ledger);
  TaskSpec t;
  t.n = 4;
  t.budget = 100;
  t.k = 4;
  t.range = AnswerRange(0, 1);
  t.threshold = 2;
  t.goldens = GoldenSet{{1, 2}, {1, 1}};
  ASSERT_TRUE(f.publish(id("r"), t));
  f.answer(id("exact"), AnswerVector{1, 1, 0, 0});
  f.answer(id("exact"), AnswerVector{0, 0, 0, 0});  // second answer ignored
  f.answer(id("low"), AnswerVector{1, 0, 0, 0});
  f.answer(id("none"), std::nullopt);
  EXPECT_EQ(f.phase(), IdealHit::Phase::kCollectAnswers);
  f.answer(id("odd"), AnswerVector{1, 1, 7, 0});
  EXPECT_EQ(f.phase(), IdealHit::Phase::kEvaluate);
  f.answer(id("late"), AnswerVector{1, 1, 1, 1});
  f.evaluate(id("r"), id("exact"));
  f.evaluate(id("r"), id("low"));
  f.evaluate(id("r"), id("none"));
  f.evaluate(id("mallory"), id("odd"));  // not the requester
  f.outrange(id("r"), id("odd"), 2);     // in range at 2
  f.outrange(id("r"), id("odd"), 3);     // too late, first request stands
  const auto d = f.finish();
  ASSERT_EQ(d.size(), 4u);
  EXPECT_TRUE(d[0].paid) << "quality exactly at threshold";
  EXPECT_FALSE(d[1].paid);
  EXPECT_FALSE(d[2].paid) << "empty submission";
  EXPECT_TRUE(d[3].paid);
  EXPECT_EQ(ledger.balance(id("r")), 50u);
  EXPECT_EQ(ledger.balance(id("late")), 0u);
}

TEST(RunIdealTest, HonestPointMatchesReal) {
  for (const char* v : {"honest", "unqualified"}) {
    const auto sc = imagenet_scenario(v);
    const auto real = run_real(sc), ideal = run_ideal(sc);
    EXPECT_EQ(real.balances, ideal.balances) << v;
    EXPECT_TRUE(compare(sc, real, ideal).equivalent());
  }
}

TEST(RunIdealTest, BottomWorkerUnpaidNoRevealIsBottom) {
  auto sc = small_scenario();
  sc.workers[1].strategy = "no-reveal";
  const auto real = run_real(sc), ideal = run_ideal(sc);
  EXPECT_EQ(ideal.bottom, std::set<PartyId>{id("bob")});
  EXPECT_EQ(ideal.balance(id("bob")), 0u);
  EXPECT_EQ(real.balance(id("bob")), 0u);
  EXPECT_TRUE(compare(sc, real, ideal).diffs.empty());
}

TEST(CompareTest, WithheldGoldensIsKnownDivergence) {
  auto sc = small_scenario();
  sc.requester.strategy = "withhold-golden";
  sc.workers[1].strategy = "bad-reveal";
  const auto real = run_real(sc), ideal = run_ideal(sc);
  EXPECT_EQ(real.balance(id("bob")), 30u) << "contract pays every entrant";
  EXPECT_EQ(ideal.balance(id("bob")), 0u);
  EXPECT_EQ(real.balance(id("alice")), ideal.balance(id("alice")));
  const auto c = compare(sc, real, ideal);
  ASSERT_EQ(c.diffs.size(), 2u) << c.describe();
  for (const auto& d : c.diffs) EXPECT_EQ(d.known, kBottomPaidWithoutGolden);
  EXPECT_TRUE(c.equivalent());
}

TEST(CompareTest, FlagsCounterexample) {
  const auto sc = small_scenario();
  auto real = run_real(sc);
  const auto ideal = run_ideal(sc);
  real.balances[id("alice")] -= 1;
  const auto c = compare(sc, real, ideal);
  EXPECT_FALSE(c.equivalent());
  EXPECT_NE(c.describe().find("COUNTEREXAMPLE"), std::string::npos);
}

// Which two of three committers enter depends only on the delivery order,
// and entrants get the same payment in both worlds.
TEST(CompareTest, ExhaustiveOrderingsKTwoOfThree) {
  auto sc = small_scenario();
  sc.workers.push_back({id("carol"), AnswerVector{0, 0, 0, 0, 1, 0, 0, 0}, "honest", {}, 0});
  std::vector<std::string> names{"alice", "bob", "carol"};
  int runs = 0;
  do {
    sc.scheduler = {"priority", 0, {}, names};
    const auto real = run_real(sc), ideal = run_ideal(sc);
    ASSERT_TRUE(real.ok());
    EXPECT_EQ(real.entrants, (std::vector<PartyId>{{names[0]}, {names[1]}}));
    EXPECT_EQ(real.entrants, ideal.entrants);
    for (const auto& n : names) {
      const bool entered = n != names[2];
      const Coins expect = entered && n != "carol" ? 30 : 0;
      EXPECT_EQ(real.balance({n}), expect) << n;
      EXPECT_EQ(ideal.balance({n}), expect) << n;
    }
    EXPECT_TRUE(compare(sc, real, ideal).equivalent());
    ++runs;
  } while (std::next_permutation(names.begin(), names.end()));
  EXPECT_EQ(runs, 6);
}

TEST(CompareTest, RandomSweepEquivalent) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const auto sc = random_scenario(seed);
    const auto c = compare(sc, run_real(sc), run_ideal(sc));
    EXPECT_TRUE(c.equivalent()) << "seed " << seed << "\n" << c.describe();
  }
}

TEST(FuzzTest, CoversStrategies) {
  std::set<std::string> workers, requesters, schedulers;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto sc = random_scenario(seed);
    EXPECT_EQ(sc.validate(), "") << seed;
    requesters.insert(sc.requester.strategy);
    schedulers.insert(sc.scheduler.strategy);
    for (const auto& w : sc.workers) workers.insert(w.strategy);
  }
  EXPECT_EQ(workers, worker_strategies());
  EXPECT_EQ(requesters, requester_strategies());
  EXPECT_EQ(schedulers.size(), 5u);
}

// With goldens opened, a revealed in-range answer meeting the threshold is
// paid whatever the requester does.
TEST(FairnessTest, QualifiedWorkersPaidUnderCorruptRequester) {
  int checked = 0;
  for (const char* strategy : {"false-reject", "false-outrange", "bad-golden-key", "silent-evaluate"}) {
    for (std::uint64_t seed = 0; seed < 12; ++seed) {
      auto sc = random_scenario(seed);
      sc.requester.strategy = strategy;
      const auto out = run_real(sc);
      ASSERT_TRUE(out.ok());
      for (const auto& v : out.verdicts) {
        const auto* w = sc.worker(v.worker);
        if (!w->honest()) continue;
        if (quality(w->answers, sc.task.goldens) >= sc.task.threshold || !out.golden_opened) {
          EXPECT_TRUE(v.paid) << strategy << " seed " << seed << " " << v.worker;
          ++checked;
        }
      }
    }
  }
  EXPECT_GT(checked, 20);
}

TEST(FairnessTest, FalseRejectStillWithholdsGenuinelyLowQuality) {
  auto sc = small_scenario();
  sc.requester.strategy = "false-reject";
  sc.workers[1].answers = AnswerVector{0, 0, 0, 0, 1, 0, 0, 0};
  const auto out = run_real(sc);
  EXPECT_EQ(out.balance(id("alice")), 30u);
  EXPECT_EQ(out.balance(id("bob")), 0u);
}

void put_u32(Bytes& b, std::uint32_t v) {
  for (int s = 24; s >= 0; s -= 8) b.push_back(static_cast<std::uint8_t>(v >> s));
}

bool contains(const Bytes& hay, const Bytes& needle) {
  return std::search(hay.begin(), hay.end(), needle.begin(), needle.end()) != hay.end();
}

TEST(ConfidentialityTest, NoPlaintextBeforeGoldens) {
  auto sc = small_scenario();
  sc.task.range = AnswerRange(0, 65535);
  sc.task.goldens.solutions = {1, 0, 1};
  for (auto& w : sc.workers) {
    w.answers = AnswerVector{48879, 1, 51966, 47806, 0, 57005, 1, 64206};
  }
  sc.workers[1].answers[0] = 49374;
  const auto out = run_real(sc);
  ASSERT_TRUE(out.ok());
  const auto log_text = out.log.dump();
  for (const auto& w : sc.workers) {
    for (std::size_t i = 0; i + 1 < w.answers.size(); ++i) {
      if (w.answers[i] < 1000) continue;
      Bytes needle;
      put_u32(needle, w.answers[i]);
      put_u32(needle, w.answers[i + 1]);
      Bytes wide;
      put_u32(wide, w.answers[i]);
      EXPECT_FALSE(contains(out.pre_golden_transcript, needle)) << w.id << " @" << i;
      EXPECT_FALSE(contains(out.pre_golden_transcript, wide)) << w.id << " @" << i;
      EXPECT_EQ(log_text.find(std::to_string(w.answers[i])), std::string::npos);
    }
  }
  // The scanner does see plaintext when it is there.
  Bytes plain;
  for (auto a : sc.workers[0].answers) put_u32(plain, a);
  Bytes needle;
  put_u32(needle, 48879);
  EXPECT_TRUE(contains(plain, needle));
  EXPECT_GT(out.pre_golden_transcript.size(), 1000u);
}

TEST(CopyPasteTest, SuiteAttackerNeverPaid) {
  const auto suite = copy_paste_suite();
  ASSERT_EQ(suite.size(), 20u);
  for (const auto& sc : suite) {
    const auto real = run_real(sc);
    ASSERT_TRUE(real.ok()) << sc.name;
    EXPECT_EQ(real.balance(id("mallory")), 0u) << sc.name;
    for (const auto& e : real.entrants) {
      const auto* w = sc.worker(e);
      if (!w->honest()) continue;
      const bool deserves = quality(w->answers, sc.task.goldens) >= sc.task.threshold;
      EXPECT_EQ(real.balance(e), deserves ? sc.task.budget / sc.task.k : 0) << sc.name << " " << e;
    }
    EXPECT_TRUE(compare(sc, real, run_ideal(sc)).equivalent()) << sc.name;
  }
}

}  // namespace
}  // namespace dragoon::sim
