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

#include <sstream>
#include <string>
#include <vector>

#include "dragoon/sim/world.hpp"

namespace dragoon::sim {

/// Expected diff class: with goldens withheld the contract pays every
/// entrant, including ones with no valid submission, while the ideal
/// functionality never pays an empty submission.
inline constexpr std::string_view kBottomPaidWithoutGolden = "unrevealed-paid-without-golden";

struct PartyDiff {
  PartyId party;
  Coins real;
  Coins ideal;
  bool honest;
  std::string known;  // empty: unexplained

  std::int64_t delta() const { return static_cast<std::int64_t>(real) - static_cast<std::int64_t>(ideal); }
};

struct Comparison {
  std::vector<PartyDiff> diffs;
  std::string failure;  // harness failure (timeout etc.)
  bool same_entrants = true;

  /// Honest parties' balances agree, up to registered divergences.
  bool equivalent() const {
    if (!failure.empty()) return false;
    for (const auto& d : diffs) {
      if (d.honest && d.known.empty()) return false;
    }
    return true;
  }

  std::string describe() const {
    std::ostringstream os;
    os << "answer approval mapped to the contract's K-commit cutoff\n";
    if (!failure.empty()) os << "FAILURE: " << failure << "\n";
    if (!same_entrants) os << "note: entrant sets differ between worlds\n";
    if (diffs.empty()) os << "no balance differences\n";
    for (const auto& d : diffs) {
      os << (d.honest ? "honest " : "corrupt ") << d.party << ": real=" << d.real
         << " ideal=" << d.ideal << " delta=" << d.delta();
      if (!d.known.empty()) {
        os << " [known: " << d.known << "]";
      } else if (d.honest) {
        os << " [COUNTEREXAMPLE]";
      }
      os << "\n";
    }
    os << (equivalent() ? "EQUIVALENT" : "DIVERGENT") << "\n";
    return os.str();
  }
};

/// Per-party balance comparison of two outcomes of the same scenario.
inline Comparison compare(const RunOutcome& real, const RunOutcome& ideal, Coins payout) {
  Comparison c;
  if (real.timed_out) c.failure = real.diagnostic;
  if (ideal.timed_out) c.failure += (c.failure.empty() ? "" : "; ") + ideal.diagnostic;
  c.same_entrants = real.entrants == ideal.entrants;

  const bool bottom_paid = real.closed && !real.golden_opened && !real.bottom.empty();
  for (const auto& [p, bal] : real.balances) {
    if (ideal.balance(p) == bal) continue;
    PartyDiff d{p, bal, ideal.balance(p), real.honest.contains(p), {}};
    if (bottom_paid && real.bottom.contains(p) && d.delta() == static_cast<std::int64_t>(payout)) {
      d.known = kBottomPaidWithoutGolden;
    }
    c.diffs.push_back(std::move(d));
  }
  // The requester's shortfall is explained when it equals exactly what the
  // unrevealed entrants were paid.
  if (bottom_paid) {
    const auto expected = -static_cast<std::int64_t>(payout * real.bottom.size());
    for (auto& d : c.diffs) {
      if (d.party == real.requester && d.delta() == expected) d.known = kBottomPaidWithoutGolden;
    }
  }
  return c;
}

inline Comparison compare(const Scenario& sc, const RunOutcome& real, const RunOutcome& ideal) {
  return compare(real, ideal, sc.task.k ? sc.task.budget / sc.task.k : 0);
}

}  // namespace dragoon::sim
