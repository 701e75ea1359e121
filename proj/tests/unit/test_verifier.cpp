#include <doctest.h>

#include <cmath>
#include <vector>

#include "bftgame/analytics.hpp"
#include "bftgame/verifier.hpp"

using namespace bftgame;

namespace {

GameParams params(int n, int f, int nu) {
  GameParams p;
  p.n = n;
  p.f = f;
  p.nu = nu;
  p.reward = 10;
  p.cost_check = 2;
  p.cost_send = 1;
  p.kappa = 20;
  return p;
}

// Reference implementation of the round-1 expectation: average the realized
// ledger over every f-subset directly, with the evaluated player forced
// rational.
Rational brute_force_round1(const GameParams& p, const StrategyProfile& profile, int player) {
  std::vector<int> subset;
  Rational total = 0;
  long long count = 0;
  std::function<void(int)> rec = [&](int next) {
    if (static_cast<int>(subset.size()) == p.f) {
      ByzantineAssignment a;
      for (int idx : subset)
        if (idx != player) a.indexes.push_back(idx);
      GameParams adjusted = p;
      adjusted.f = static_cast<int>(a.indexes.size());
      RunResult r = run_height(adjusted, a, profile);
      total += combine_utility(p, utility_counts(r.trace, player, 1));
      ++count;
      return;
    }
    for (int i = next; i <= p.n; ++i) {
      subset.push_back(i);
      rec(i + 1);
      subset.pop_back();
    }
  };
  rec(1);
  return total / count;
}

}  // namespace

TEST_CASE("round-1 oracle equals direct ledger averaging") {
  GameParams p = params(8, 2, 3);
  for (const char* name : {"prop1", "prop2", "prop4"}) {
    StrategyProfile profile = profile_by_name(p, name);
    for (int player : {1, 3, 8}) {
      CHECK(expected_utility_exact(p, profile, Conditioning{1}, player) ==
            brute_force_round1(p, profile, player));
    }
  }
}

TEST_CASE("always-send equilibrium utilities match the closed forms") {
  GameParams p = params(10, 4, 3);
  StrategyProfile profile = profile_prop1(p);
  const Rational hazard(p.f, p.n);

  // Receiver: R - c_send - (f/n) kappa.
  CHECK(expected_utility_exact(p, profile, Conditioning{1}, 5) ==
        p.reward - p.cost_send - hazard * p.kappa);
  // Round-1 proposer evaluated as rational: R - c_check - c_send.
  CHECK(expected_utility_exact(p, profile, Conditioning{1}, 1) ==
        p.reward - p.cost_check - p.cost_send);

  // Closed-form deviation payoffs for a receiver.
  auto dev = [&](RoundAction a) {
    return expected_utility_exact(p, profile, Conditioning{1}, 5, Deviation{5, 1, a});
  };
  CHECK(dev({std::nullopt, false, SendRule::NeverSend}) == -hazard * p.kappa);
  CHECK(dev({std::nullopt, true, SendRule::NeverSend}) == -p.cost_check - hazard * p.kappa);
  CHECK(dev({std::nullopt, true, SendRule::AlwaysSend}) ==
        p.reward - p.cost_send - hazard * p.kappa - p.cost_check);
  CHECK(dev({std::nullopt, true, SendRule::SendIffValid}) ==
        -p.cost_check + (1 - hazard) * (p.reward - p.cost_send) - hazard * p.kappa);
  CHECK(dev({std::nullopt, true, SendRule::SendIffInvalid}) ==
        -p.cost_check + hazard * (p.reward - p.cost_send - p.kappa));
}

TEST_CASE("silent equilibrium is zero everywhere and deviations never gain") {
  GameParams p = params(10, 2, 4);
  StrategyProfile profile = profile_prop2(p);
  for (int t = 1; t <= p.f + 1; ++t) {
    for (int player = t; player <= p.n; player += 3) {
      CHECK(expected_utility_exact(p, profile, Conditioning{t}, player) == 0);
      for (const RoundAction& b : all_receiver_behaviors()) {
        if (player == t) continue;
        Rational d = expected_utility_exact(p, profile, Conditioning{t}, player,
                                            Deviation{player, t, b});
        CHECK(d <= 0);
      }
    }
  }
}

TEST_CASE("silent-profile pivot deviation appears exactly when f = nu - 1") {
  // With f = nu - 1 a lone sender completes the quorum at invalid rounds;
  // with f < nu - 1 the send is pure cost.
  GameParams pivot = params(10, 3, 4);
  StrategyProfile prof = profile_prop2(pivot);
  Rational d_pivot = expected_utility_exact(pivot, prof, Conditioning{1}, 5,
                                            Deviation{5, 1, {std::nullopt, false, SendRule::AlwaysSend}});
  CHECK(d_pivot < -pivot.cost_send);  // the kappa exposure bites

  GameParams no_pivot = params(10, 2, 4);
  StrategyProfile prof2 = profile_prop2(no_pivot);
  Rational d_flat = expected_utility_exact(no_pivot, prof2, Conditioning{1}, 5,
                                           Deviation{5, 1, {std::nullopt, false, SendRule::AlwaysSend}});
  CHECK(d_flat == -no_pivot.cost_send);
}

TEST_CASE("staged-profile continuations reproduce the closed-form payoffs") {
  GameParams p = params(9, 2, 3);
  StrategyProfile profile = profile_prop4(p);
  const int checker_bound = p.n - p.nu + p.f + 1;  // 9

  for (int t = 1; t <= p.f; ++t) {
    // Checkers that never become proposers before termination.
    for (int i = p.f + 2; i <= checker_bound; ++i)
      CHECK(expected_utility_exact(p, profile, Conditioning{t}, i) == pi_check(p, t));
    // Free senders.
    for (int i = checker_bound + 1; i <= p.n; ++i)
      CHECK(expected_utility_exact(p, profile, Conditioning{t}, i) == pi_send(p, t));
  }
}

TEST_CASE("early-index checkers truncate their continuation at their own round") {
  // A checker that proposes at round i <= f+1 ends the game there itself, so
  // its continuation exceeds the steady-state closed-form value (no further check
  // costs accrue past its own proposal round).
  GameParams p = params(8, 3, 4);
  StrategyProfile profile = profile_prop4(p);
  Rational w = expected_utility_exact(p, profile, Conditioning{1}, 2);
  CHECK(w != pi_check(p, 1));
  CHECK(w > pi_check(p, 1));
}

TEST_CASE("main deviation is pivotal: the invalid block reaches exactly nu votes") {
  GameParams p = params(9, 2, 3);
  StrategyProfile profile = profile_prop4(p);
  // All Byzantines inside the checker range; checker 5 deviates to blind send
  // at the Byzantine round 1.
  Deviation dev{5, 1, {std::nullopt, false, SendRule::AlwaysSend}};
  StrategyProfile deviated = profile;
  Strategy base = profile.per_player[4];
  deviated.per_player[4] = [base, dev](int player, const InfoSet& h) {
    if (h.round == dev.round) return dev.action;
    return base(player, h);
  };
  RunResult r = run_height(p, ByzantineAssignment::worst_case(2), deviated);
  REQUIRE(r.trace.accepted());
  CHECK(r.trace.termination_round == 1);
  CHECK(*r.trace.accepted_block_valid == false);
  CHECK(r.trace.rounds[0].message_count == p.nu);
}

TEST_CASE("one-shot deviations leave earlier rounds untouched") {
  GameParams p = params(9, 2, 3);
  StrategyProfile profile = profile_prop4(p);
  RunResult base = run_height(p, ByzantineAssignment::worst_case(2), profile);

  Strategy orig = profile.per_player[5];
  StrategyProfile deviated = profile;
  deviated.per_player[5] = [orig](int player, const InfoSet& h) {
    if (h.round == 2) return RoundAction{std::nullopt, false, SendRule::NeverSend};
    return orig(player, h);
  };
  RunResult alt = run_height(p, ByzantineAssignment::worst_case(2), deviated);
  REQUIRE(!base.trace.rounds.empty());
  REQUIRE(!alt.trace.rounds.empty());
  CHECK(base.trace.rounds[0].message_count == alt.trace.rounds[0].message_count);
  for (int i = 1; i <= p.n; ++i) {
    CHECK(base.trace.rounds[0].actions[i - 1].checked == alt.trace.rounds[0].actions[i - 1].checked);
    CHECK(base.trace.rounds[0].actions[i - 1].sent == alt.trace.rounds[0].actions[i - 1].sent);
  }
}

TEST_CASE("monte carlo estimates agree with exact values") {
  GameParams p = params(8, 2, 3);
  StrategyProfile profile = profile_prop4(p);
  for (int player : {4, 6, 8}) {
    Rational exact = expected_utility_exact(p, profile, Conditioning{1}, player);
    McEstimate mc = expected_utility_mc(p, profile, Conditioning{1}, player, std::nullopt,
                                        20000, 42);
    double gap = std::fabs(mc.estimate - to_double(exact));
    CHECK(gap <= 3.0 * mc.stderr_ + 1e-12);
  }
}

TEST_CASE("monte carlo is seed-deterministic") {
  GameParams p = params(8, 2, 3);
  StrategyProfile profile = profile_prop4(p);
  McEstimate a = expected_utility_mc(p, profile, Conditioning{1}, 5, std::nullopt, 5000, 7);
  McEstimate b = expected_utility_mc(p, profile, Conditioning{1}, 5, std::nullopt, 5000, 7);
  McEstimate c = expected_utility_mc(p, profile, Conditioning{1}, 5, std::nullopt, 5000, 8);
  CHECK(a.estimate == b.estimate);
  CHECK(a.stderr_ == b.stderr_);
  CHECK(a.estimate != c.estimate);
}

TEST_CASE("oracle guards") {
  GameParams p = params(30, 2, 3);
  StrategyProfile profile = profile_prop1(p);
  CHECK_THROWS_AS(expected_utility_exact(p, profile, Conditioning{1}, 5), GameError);
  try {
    expected_utility_exact(p, profile, Conditioning{1}, 5);
  } catch (const GameError& e) {
    CHECK(e.code() == Errc::EnumerationTooLarge);
  }

  GameParams q = params(8, 2, 3);
  StrategyProfile prof = profile_prop4(q);
  // Round 4 conditioning needs three Byzantine prefix proposers; f = 2.
  CHECK_THROWS_AS(expected_utility_exact(q, prof, Conditioning{4}, 5), GameError);
  // Evaluated player inside the Byzantine prefix.
  CHECK_THROWS_AS(expected_utility_exact(q, prof, Conditioning{2}, 1), GameError);
}

TEST_CASE("round-f pivotality is outside the stated kappa condition") {
  // The kappa threshold quantifies over rounds t < f only, so it is vacuous
  // at f = 1. Yet the main deviation is pivotal at round t = f too: with
  // n=10, f=1, nu=5, kappa=20 the blind send earns R - c_send - kappa/n = 7,
  // tying the steady checkers and strictly beating the truncated
  // continuation of checker index 2. The oracle reports this faithfully
  // rather than assuming the claimed equilibrium.
  GameParams p = params(10, 1, 5);
  CHECK(!kappa_threshold(p));  // vacuous condition
  StrategyProfile profile = profile_prop4(p);
  RoundAction blind{std::nullopt, false, SendRule::AlwaysSend};

  Rational eq_steady = expected_utility_exact(p, profile, Conditioning{1}, 5);
  Rational dev_steady =
      expected_utility_exact(p, profile, Conditioning{1}, 5, Deviation{5, 1, blind});
  CHECK(eq_steady == pi_check(p, 1));
  CHECK(dev_steady == eq_steady);  // exact tie at kappa = 20

  Rational eq_early = expected_utility_exact(p, profile, Conditioning{1}, 2);
  Rational dev_early =
      expected_utility_exact(p, profile, Conditioning{1}, 2, Deviation{2, 1, blind});
  CHECK(eq_early < pi_check(p, 1));
  CHECK(dev_early > eq_early);  // strictly profitable despite the thresholds

  VerificationReport rep = verify_equilibrium(p, profile_prop4(p));
  CHECK(rep.any_profitable);
}

TEST_CASE("full verification returns all-dominated on the canonical profiles") {
  GameParams p = params(8, 2, 3);
  for (const char* name : {"prop1", "prop2", "prop4"}) {
    StrategyProfile profile = profile_by_name(p, name);
    VerificationReport rep = verify_equilibrium(p, profile);
    CHECK(rep.all_dominated);
    CHECK(!rep.any_profitable);
  }
}

TEST_CASE("closed-form annotations are exact for the always-send profile") {
  GameParams p = params(10, 4, 3);
  VerificationReport rep = verify_equilibrium(p, profile_prop1(p));
  REQUIRE(!rep.deviations.empty());
  for (const DominanceReport& row : rep.deviations) {
    if (!row.matched) continue;
    CHECK(row.matched->abs_diff == 0);
  }
}
