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

// Command-line front end: run scenarios, compare worlds, fuzz, bench, keygen.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "dragoon/bench.hpp"
#include "dragoon/sim.hpp"

namespace {

using namespace dragoon;
using namespace dragoon::sim;

enum Exit { kOk = 0, kDiverged = 1, kInvalid = 2, kTimeout = 3 };

Coins refunded(const RunOutcome& out) {
  Coins total = 0;
  for (const auto& r : out.log.records()) {
    if (r.kind == "refund" && r.amount) total += *r.amount;
  }
  return total;
}

void print_outcome(const Scenario& sc, const RunOutcome& out) {
  std::printf("scenario %s (%s world): %s at clock %llu\n", sc.name.c_str(), out.world.c_str(),
              out.closed ? "closed" : "timed out", static_cast<unsigned long long>(out.end_clock));
  if (!out.diagnostic.empty()) std::printf("diagnostic: %s\n", out.diagnostic.c_str());
  std::printf("goldens opened: %s\n", out.golden_opened ? "yes" : "no");
  std::printf("%-14s %-14s %-5s %-22s %10s\n", "worker", "strategy", "paid", "reason", "balance");
  for (const auto& v : out.verdicts) {
    const auto* w = sc.worker(v.worker);
    std::printf("%-14s %-14s %-5s %-22s %10llu\n", v.worker.name.c_str(), w ? w->strategy.c_str() : "?",
                v.paid ? "yes" : "no", v.reason.c_str(),
                static_cast<unsigned long long>(out.balance(v.worker)));
  }
  std::printf("%s balance %llu (refund %llu)\n", sc.requester.id.name.c_str(),
              static_cast<unsigned long long>(out.balance(sc.requester.id)),
              static_cast<unsigned long long>(refunded(out)));
  std::printf("messages:");
  for (const auto& [kind, n] : out.message_counts) {
    std::printf(" %s=%zu/%zuB", kind.c_str(), n, out.message_bytes.at(kind));
  }
  std::printf("\n");
}

bool write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  f << text;
  return static_cast<bool>(f);
}

Scenario reseeded(Scenario sc, std::uint64_t i) {
  sc.seed += i;
  sc.scheduler.seed += i;
  return sc;
}

// One real/ideal comparison; prints a line, and the report on failure.
bool check_one(const Scenario& sc, bool verbose) {
  const auto real = run_real(sc);
  const auto ideal = run_ideal(sc);
  const auto c = compare(sc, real, ideal);
  std::size_t known = 0;
  for (const auto& d : c.diffs) known += !d.known.empty();
  std::printf("%-24s %-16s %-15s %s%s\n", sc.name.c_str(), sc.requester.strategy.c_str(),
              sc.scheduler.strategy.c_str(), c.equivalent() ? "ok" : "DIVERGENT",
              known ? " (known divergence)" : "");
  if (verbose || !c.equivalent()) std::printf("%s", c.describe().c_str());
  return c.equivalent();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Private decentralized HIT protocol simulator"};
  app.require_subcommand(1);

  std::string path;
  std::string log_out;
  bool show_log = false;
  bool ideal = false;
  auto* run = app.add_subcommand("run", "Execute a scenario and print verdicts");
  run->add_option("scenario", path, "Scenario file")->required();
  run->add_flag("--log", show_log, "Print the audit log");
  run->add_option("--log-out", log_out, "Write the audit log to a file");
  run->add_flag("--ideal", ideal, "Run the ideal world instead");

  std::uint64_t seeds = 1;
  bool verbose = false;
  auto* check = app.add_subcommand("check", "Compare real and ideal worlds");
  check->add_option("scenario", path, "Scenario file (omit for generated scenarios)");
  check->add_option("--seeds", seeds, "Number of seeds to try");
  check->add_flag("-v,--verbose", verbose, "Print every comparison report");

  std::size_t reps = 50;
  bool enforce = false;
  auto* bench = app.add_subcommand("bench", "Time proofs for the ImageNet task shape");
  bench->add_option("--reps", reps, "Repetitions per operation")->check(CLI::PositiveNumber);
  bench->add_flag("--enforce", enforce, "Exit nonzero when a limit is exceeded");

  std::uint64_t from = 0, to = 200;
  std::string dump_dir;
  auto* fuzz = app.add_subcommand("fuzz", "Real/ideal comparison over generated scenarios");
  fuzz->add_option("--from", from, "First seed");
  fuzz->add_option("--to", to, "One past the last seed");
  fuzz->add_option("--dump", dump_dir, "Directory for failing scenarios");

  std::uint64_t key_seed = 0;
  std::string key_out;
  auto* keygen = app.add_subcommand("keygen", "Emit a requester key profile");
  keygen->add_option("--seed", key_seed, "Seed for the key")->required();
  keygen->add_option("--out", key_out, "Output file (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      const auto sc = load_scenario(path);
      const auto out = ideal ? run_ideal(sc) : run_real(sc);
      print_outcome(sc, out);
      if (show_log) std::printf("%s", out.log.dump().c_str());
      if (!log_out.empty() && !write_file(log_out, out.log.dump())) {
        std::fprintf(stderr, "cannot write %s\n", log_out.c_str());
        return kInvalid;
      }
      return out.timed_out ? kTimeout : kOk;
    }

    if (check->parsed()) {
      bool ok = true;
      for (std::uint64_t i = 0; i < seeds; ++i) {
        const auto sc = path.empty() ? random_scenario(i) : reseeded(load_scenario(path), i);
        ok &= check_one(sc, verbose);
      }
      return ok ? kOk : kDiverged;
    }

    if (fuzz->parsed()) {
      std::size_t bad = 0;
      for (auto s = from; s < to; ++s) {
        const auto sc = random_scenario(s);
        if (!check_one(sc, false)) {
          ++bad;
          if (!dump_dir.empty()) {
            write_file(dump_dir + "/" + sc.name + ".json", to_json(sc).dump(2) + "\n");
          }
        }
      }
      std::printf("%zu/%llu scenarios divergent\n", bad, static_cast<unsigned long long>(to - from));
      return bad ? kDiverged : kOk;
    }

    if (bench->parsed()) {
      const auto rows = run_benchmarks(reps);
      std::printf("ImageNet shape: N=106, |G|=6, binary range, all goldens wrong\n%s",
                  format_bench(rows).c_str());
      bool ok = true;
      for (const auto& lim : kBenchLimits) {
        for (const auto& r : rows) {
          if (r.op != lim.op) continue;
          const bool pass = r.median_ms <= lim.ms;
          ok &= pass;
          std::printf("%-16s median %.3f ms <= %.0f ms: %s\n", r.op.c_str(), r.median_ms, lim.ms,
                      pass ? "PASS" : "FAIL");
        }
      }
      return ok || !enforce ? kOk : kDiverged;
    }

    if (keygen->parsed()) {
      using G = Ristretto255;
      Rng rng(key_seed);
      const auto kp = KeyPair<G>::generate(rng);
      const auto sk = G::encode_scalar(kp.secret);
      nlohmann::ordered_json j{{"group", G::name},
                               {"hash", kHashName},
                               {"secret_key", to_hex(sk)},
                               {"public_key", to_hex(G::encode(kp.pub))}};
      const auto text = j.dump(2) + "\n";
      if (key_out.empty()) {
        std::printf("%s", text.c_str());
      } else if (!write_file(key_out, text)) {
        std::fprintf(stderr, "cannot write %s\n", key_out.c_str());
        return kInvalid;
      }
      return kOk;
    }
  } catch (const ScenarioError& e) {
    std::fprintf(stderr, "invalid scenario: %s\n", e.what());
    return kInvalid;
  }
  return kOk;
}
