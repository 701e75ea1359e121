#include "bftgame/verifier.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "bftgame/analytics.hpp"

namespace bftgame {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// All f-subsets of {1..n} that contain {1..prefix_len}, in lexicographic order.
void for_each_subset_with_prefix(int n, int f, int prefix_len,
                                 const std::function<void(const std::vector<int>&)>& fn) {
  std::vector<int> subset(static_cast<size_t>(f));
  for (int i = 0; i < prefix_len; ++i) subset[static_cast<size_t>(i)] = i + 1;
  const int free_count = f - prefix_len;
  if (free_count == 0) {
    fn(subset);
    return;
  }
  std::vector<int> pick(static_cast<size_t>(free_count));
  for (int i = 0; i < free_count; ++i) pick[static_cast<size_t>(i)] = prefix_len + 1 + i;
  while (true) {
    for (int i = 0; i < free_count; ++i)
      subset[static_cast<size_t>(prefix_len + i)] = pick[static_cast<size_t>(i)];
    fn(subset);
    int k = free_count - 1;
    while (k >= 0 && pick[static_cast<size_t>(k)] == n - (free_count - 1 - k)) --k;
    if (k < 0) break;
    ++pick[static_cast<size_t>(k)];
    for (int j = k + 1; j < free_count; ++j)
      pick[static_cast<size_t>(j)] = pick[static_cast<size_t>(j - 1)] + 1;
  }
}

StrategyProfile with_deviation(const StrategyProfile& profile, const Deviation& dev) {
  StrategyProfile out = profile;
  Strategy base = profile.per_player.at(static_cast<size_t>(dev.player - 1));
  RoundAction action = dev.action;
  int round = dev.round;
  out.per_player[static_cast<size_t>(dev.player - 1)] =
      [base = std::move(base), action, round](int player, const InfoSet& h) {
        if (h.round == round) return action;
        return base(player, h);
      };
  return out;
}

// The evaluated player always acts rationally; if it occupies one of the f
// sampled Byzantine slots, that slot simply carries no Byzantine.
ByzantineAssignment assignment_without(const std::vector<int>& subset, int player) {
  ByzantineAssignment a;
  a.indexes.reserve(subset.size());
  for (int idx : subset)
    if (idx != player) a.indexes.push_back(idx);
  return a;
}

struct RunOutcome {
  ExecutionTrace trace;
  bool consistent = false;
};

RunOutcome run_for_subset(const GameParams& p, const StrategyProfile& profile,
                          const std::vector<int>& subset, int player, int from_round) {
  ByzantineAssignment byz = assignment_without(subset, player);
  GameParams adjusted = p;
  adjusted.f = static_cast<int>(byz.indexes.size());
  RunOutcome out;
  out.trace = run_height(adjusted, byz, profile).trace;
  out.consistent =
      !(out.trace.accepted() && out.trace.termination_round < from_round);
  return out;
}

}  // namespace

Rational expected_utility_exact(const GameParams& p, const StrategyProfile& profile,
                                const Conditioning& cond, int player,
                                const std::optional<Deviation>& deviation, int exact_bound) {
  if (p.n > exact_bound)
    throw GameError(Errc::EnumerationTooLarge,
                    "n = " + std::to_string(p.n) + " exceeds the exact-mode bound");
  const int prefix = cond.round - 1;
  if (prefix < 0 || prefix > p.f)
    throw GameError(Errc::InfeasibleConditioning,
                    "prefix of " + std::to_string(prefix) + " Byzantine proposers with f = " +
                        std::to_string(p.f));
  if (player <= prefix)
    throw GameError(Errc::InfeasibleConditioning,
                    "player " + std::to_string(player) + " proposed inside the Byzantine prefix");

  const StrategyProfile* effective = &profile;
  StrategyProfile deviated;
  if (deviation) {
    deviated = with_deviation(profile, *deviation);
    effective = &deviated;
  }

  UtilityCounts total;
  long long consistent = 0;
  for_each_subset_with_prefix(p.n, p.f, prefix, [&](const std::vector<int>& subset) {
    RunOutcome out = run_for_subset(p, *effective, subset, player, cond.round);
    if (!out.consistent) return;
    total += utility_counts(out.trace, player, cond.round);
    ++consistent;
  });
  if (consistent == 0)
    throw GameError(Errc::InfeasibleConditioning,
                    "no Byzantine subset reaches round " + std::to_string(cond.round));
  return combine_utility(p, total) / consistent;
}

McEstimate expected_utility_mc(const GameParams& p, const StrategyProfile& profile,
                               const Conditioning& cond, int player,
                               const std::optional<Deviation>& deviation,
                               long long trials, std::uint64_t seed) {
  if (trials < 1) throw GameError(Errc::RangeViolated, "trials must be >= 1");
  const int prefix = cond.round - 1;
  if (prefix < 0 || prefix > p.f || player <= prefix)
    throw GameError(Errc::InfeasibleConditioning, "conditioning prefix infeasible");

  const StrategyProfile* effective = &profile;
  StrategyProfile deviated;
  if (deviation) {
    deviated = with_deviation(profile, *deviation);
    effective = &deviated;
  }

  std::vector<int> pool;
  for (int i = prefix + 1; i <= p.n; ++i) pool.push_back(i);
  const int draws = p.f - prefix;

  double sum = 0.0;
  double sum_sq = 0.0;
  for (long long trial = 0; trial < trials; ++trial) {
    std::mt19937_64 rng(splitmix64(seed ^ (0x5851F42D4C957F2DULL + static_cast<std::uint64_t>(trial))));
    bool done = false;
    for (int attempt = 0; attempt < 1000 && !done; ++attempt) {
      std::vector<int> local = pool;
      std::vector<int> subset;
      subset.reserve(static_cast<size_t>(p.f));
      for (int i = 1; i <= prefix; ++i) subset.push_back(i);
      for (int d = 0; d < draws; ++d) {
        std::uniform_int_distribution<size_t> pickdist(d, local.size() - 1);
        std::swap(local[static_cast<size_t>(d)], local[pickdist(rng)]);
        subset.push_back(local[static_cast<size_t>(d)]);
      }
      std::sort(subset.begin(), subset.end());
      RunOutcome out = run_for_subset(p, *effective, subset, player, cond.round);
      if (!out.consistent) continue;  // rejection sampling against the conditioning
      double u = to_double(combine_utility(p, utility_counts(out.trace, player, cond.round)));
      sum += u;
      sum_sq += u * u;
      done = true;
    }
    if (!done)
      throw GameError(Errc::InfeasibleConditioning, "rejection sampling failed to converge");
  }

  McEstimate est;
  est.trials = trials;
  est.estimate = sum / static_cast<double>(trials);
  if (trials > 1) {
    double var = (sum_sq - sum * sum / static_cast<double>(trials)) /
                 static_cast<double>(trials - 1);
    est.stderr_ = std::sqrt(std::max(var, 0.0) / static_cast<double>(trials));
  }
  return est;
}

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Dominated: return "dominated";
    case Verdict::Profitable: return "profitable";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

namespace {

// Closed-form payoffs of the analytic model, for canonical profiles.
// The labels name the profile, the player class, and the action.
std::optional<AnalyticMatch> closed_form(const GameParams& p, const std::string& profile_name,
                                         int t, int player, bool is_equilibrium,
                                         const RoundAction& action) {
  const Rational R = p.reward, cc = p.cost_check, cs = p.cost_send, kappa = p.kappa;
  auto match = [&](std::string label, Rational value) {
    return AnalyticMatch{std::move(label), std::move(value), Rational(0)};
  };
  auto behavior_is = [&](bool check, SendRule rule) {
    return action.check == check && action.send == rule;
  };

  if (profile_name == "prop1") {
    if (t != 1) return std::nullopt;
    const Rational q(p.f, p.n);
    if (player == 1) {
      if (is_equilibrium) return match("prop1.proposer.eq", R - cc - cs);
      if (action.propose_valid && !*action.propose_valid)
        return match("prop1.proposer.propose-invalid", R - cc - cs - kappa);
      return std::nullopt;
    }
    if (is_equilibrium) return match("prop1.receiver.eq", R - cs - q * kappa);
    if (behavior_is(false, SendRule::NeverSend))
      return match("prop1.dev.no-send", -q * kappa);
    if (behavior_is(true, SendRule::SendIffValid))
      return match("prop1.dev.check-send-iff-valid", -cc + (1 - q) * (R - cs) - q * kappa);
    if (behavior_is(true, SendRule::SendIffInvalid))
      return match("prop1.dev.check-send-iff-invalid", -cc + q * (R - cs - kappa));
    if (behavior_is(true, SendRule::AlwaysSend))
      return match("prop1.dev.check-always-send", R - cs - q * kappa - cc);
    if (behavior_is(true, SendRule::NeverSend))
      return match("prop1.dev.check-no-send", -cc - q * kappa);
    return std::nullopt;
  }

  if (profile_name == "prop2") {
    const Rational q(p.f - t + 1, p.n - t + 1);
    const Rational pivot = (p.f == p.nu - 1) ? q * (R - kappa) : Rational(0);
    if (player == t) {
      if (is_equilibrium) return match("prop2.proposer.eq", Rational(0));
      if (action.propose_valid && !*action.propose_valid)
        return match("prop2.proposer.propose-invalid", Rational(0));
      return std::nullopt;
    }
    if (is_equilibrium) return match("prop2.receiver.eq", Rational(0));
    if (behavior_is(false, SendRule::AlwaysSend))
      return match("prop2.dev.send-no-check", -cs + pivot);
    if (behavior_is(true, SendRule::SendIffValid))
      return match("prop2.dev.check-send-iff-valid", -cc - (1 - q) * cs);
    if (behavior_is(true, SendRule::SendIffInvalid))
      return match("prop2.dev.check-send-iff-invalid", -cc + pivot - q * cs);
    if (behavior_is(true, SendRule::AlwaysSend))
      return match("prop2.dev.check-always-send", -cs - cc + pivot);
    if (behavior_is(true, SendRule::NeverSend))
      return match("prop2.dev.check-no-send", -cc);
    return std::nullopt;
  }

  if (profile_name == "prop4") {
    if (!(p.f < p.nu && p.n - p.f > p.nu)) return std::nullopt;
    const int checker_bound = p.n - p.nu + p.f + 1;
    if (t <= p.f) {
      const Rational h(p.f - t + 1, p.n - t + 1);
      if (player == t) {
        if (is_equilibrium) return match("prop4.proposer.eq", R - cc - cs);
        return std::nullopt;  // the flip payoff has no displayed closed form
      }
      if (player <= checker_bound) {
        const Rational below = prob_iB_below(p.n, p.f, p.nu, t);
        const Rational above = 1 - below;
        const Rational cont_phi = (t < p.f) ? phi(p.n, p.f, t + 1) : Rational(0);
        const Rational cont = R - cs - cont_phi * cc;  // pi_check(t+1), = R - c_send at t = f
        if (is_equilibrium) return match("prop4.checker.eq", pi_check(p, t));
        if (behavior_is(false, SendRule::AlwaysSend))
          return match("prop4.dev.checker.main-no-check-send",
                       (R - cs) - h * below * kappa - h * above * (cont_phi * cc + cs));
        if (behavior_is(false, SendRule::NeverSend))
          return match("prop4.dev.checker.idle", h * cont);
        if (behavior_is(true, SendRule::AlwaysSend))
          return match("prop4.dev.checker.check-always-send",
                       (R - cs) - h * below * kappa - h * above * (cont_phi * cc + cs) - cc);
        if (behavior_is(true, SendRule::NeverSend))
          return match("prop4.dev.checker.check-no-send", -cc + h * cont);
        if (behavior_is(true, SendRule::SendIffInvalid))
          return match("prop4.dev.checker.check-send-iff-invalid",
                       -cc + h * (below * (R - cs - kappa) + above * (cont - cs)));
        return std::nullopt;
      }
      // Free sender.
      const Rational cont = pi_send(p, t + 1);
      if (is_equilibrium) return match("prop4.sender.eq", pi_send(p, t));
      if (behavior_is(false, SendRule::NeverSend))
        return match("prop4.dev.sender.no-send", h * cont);
      if (behavior_is(true, SendRule::SendIffValid))
        return match("prop4.dev.sender.check-send-iff-valid",
                     -cc + (1 - h) * (R - cs) + h * cont);
      if (behavior_is(true, SendRule::AlwaysSend))
        return match("prop4.dev.sender.check-always-send", pi_send(p, t) - cc);
      if (behavior_is(true, SendRule::NeverSend))
        return match("prop4.dev.sender.check-no-send", -cc + h * cont);
      if (behavior_is(true, SendRule::SendIffInvalid))
        return match("prop4.dev.sender.check-send-iff-invalid", -cc - h * cs + h * cont);
      return std::nullopt;
    }
    if (t == p.f + 1) {
      if (is_equilibrium) return match("prop4.final-round.eq", R - cs);
      if (player == t) {
        if (action.propose_valid && !*action.propose_valid)
          return match("prop4.dev.final-round.propose-invalid", R - cc - cs - kappa);
        return std::nullopt;
      }
      if (behavior_is(false, SendRule::NeverSend))
        return match("prop4.dev.final-round.no-send", Rational(0));
      if (behavior_is(true, SendRule::AlwaysSend))
        return match("prop4.dev.final-round.check-always-send", R - cs - cc);
      if (behavior_is(true, SendRule::SendIffValid))
        return match("prop4.dev.final-round.check-send-iff-valid", R - cs - cc);
      if (behavior_is(true, SendRule::NeverSend))
        return match("prop4.dev.final-round.check-no-send", -cc);
      if (behavior_is(true, SendRule::SendIffInvalid))
        return match("prop4.dev.final-round.check-send-iff-invalid", -cc);
      return std::nullopt;
    }
  }
  return std::nullopt;
}

InfoSet info_set_at(const ExecutionTrace& trace, int player, int round) {
  InfoSet h = initial_info_set(trace.assignment.contains(player) ? PlayerType::Byzantine
                                                                 : PlayerType::Rational);
  for (const RoundRecord& rec : trace.rounds) {
    if (rec.round >= round) break;
    const PlayerRealization& r = rec.actions[static_cast<size_t>(player - 1)];
    h = update_info_set(h, {rec.message_count, rec.accepted, r.checked, rec.block_valid});
  }
  return h;
}

// A representative Byzantine subset consistent with the conditioning prefix
// and avoiding `player`: the prefix plus the highest remaining indexes.
std::vector<int> representative_subset(int n, int f, int prefix, int player) {
  std::vector<int> subset;
  for (int i = 1; i <= prefix; ++i) subset.push_back(i);
  for (int i = n; static_cast<int>(subset.size()) < f && i > prefix; --i)
    if (i != player) subset.push_back(i);
  std::sort(subset.begin(), subset.end());
  return subset;
}

}  // namespace

std::optional<AnalyticMatch> analytic_equilibrium_expression(const GameParams& p,
                                                             const std::string& profile_name,
                                                             int t, int player) {
  return closed_form(p, profile_name, t, player, true, RoundAction{});
}

std::optional<AnalyticMatch> analytic_deviation_expression(const GameParams& p,
                                                           const std::string& profile_name,
                                                           int t, int player,
                                                           const RoundAction& action) {
  return closed_form(p, profile_name, t, player, false, action);
}

VerificationReport verify_equilibrium(const GameParams& p, const StrategyProfile& profile,
                                      const VerifyOptions& opts) {
  if (auto err = validate_params(p))
    throw GameError(*err, "verify_equilibrium: invalid parameters");
  if (opts.mode == VerifyMode::Exact && p.n > opts.exact_bound)
    throw GameError(Errc::EnumerationTooLarge,
                    "exact mode bound exceeded; configure Monte-Carlo mode");

  VerificationReport report;
  report.all_dominated = true;

  const int last_round = std::min(p.f + 1, p.n);
  for (int t = 1; t <= last_round; ++t) {
    const Conditioning cond{t};
    bool round_feasible = true;
    for (int player = t; player <= p.n && round_feasible; ++player) {
      Rational eq_exact;
      McEstimate eq_mc;
      try {
        if (opts.mode == VerifyMode::Exact)
          eq_exact = expected_utility_exact(p, profile, cond, player, std::nullopt,
                                            opts.exact_bound);
        else
          eq_mc = expected_utility_mc(p, profile, cond, player, std::nullopt, opts.trials,
                                      splitmix64(opts.seed ^ static_cast<std::uint64_t>(
                                                                 t * 1000003 + player)));
      } catch (const GameError& e) {
        if (e.code() == Errc::InfeasibleConditioning) {
          round_feasible = false;
          break;
        }
        throw;
      }

      // Prescribed on-path action, queried on a representative history.
      std::vector<int> rep = representative_subset(p.n, p.f, t - 1, player);
      GameParams rep_params = p;
      ByzantineAssignment rep_byz = assignment_without(rep, player);
      rep_params.f = static_cast<int>(rep_byz.indexes.size());
      ExecutionTrace rep_trace = run_height(rep_params, rep_byz, profile).trace;
      if (rep_trace.accepted() && rep_trace.termination_round < t) continue;
      const RoundAction prescribed =
          profile.strategy_of(player)(player, info_set_at(rep_trace, player, t));

      std::vector<RoundAction> alternatives;
      if (player == t) {
        // Proposers deviate on the validity of their proposal; their
        // receiver behavior is held fixed (matching the closed-form payoff
        // model), except that a deviator proposing an invalid block
        // votes for it rather than filtering its own proposal away.
        RoundAction flip = prescribed;
        flip.propose_valid = !prescribed.propose_valid.value_or(true);
        if (!*flip.propose_valid && flip.send == SendRule::SendIffValid)
          flip.send = SendRule::AlwaysSend;
        alternatives.push_back(flip);
      } else {
        for (const RoundAction& b : all_receiver_behaviors()) {
          if (b.check == prescribed.check && b.send == prescribed.send) continue;
          alternatives.push_back(b);
        }
      }

      for (const RoundAction& alt : alternatives) {
        DominanceReport row;
        row.deviation = Deviation{player, t, alt};
        row.matched = analytic_deviation_expression(p, profile.name, t, player, alt);
        if (opts.mode == VerifyMode::Exact) {
          Rational dev = expected_utility_exact(p, profile, cond, player, row.deviation,
                                                opts.exact_bound);
          row.equilibrium_exact = eq_exact;
          row.deviation_exact = dev;
          row.verdict = (eq_exact >= dev) ? Verdict::Dominated : Verdict::Profitable;
          if (row.matched) row.matched->abs_diff = abs(dev - row.matched->value);
        } else {
          McEstimate dev = expected_utility_mc(
              p, profile, cond, player, row.deviation, opts.trials,
              splitmix64(opts.seed ^
                         static_cast<std::uint64_t>(t * 7368787 + player * 971 +
                                                    static_cast<int>(report.deviations.size()))));
          row.equilibrium_mc = eq_mc;
          row.deviation_mc = dev;
          const double gap = eq_mc.estimate - dev.estimate;
          const double sigma =
              std::sqrt(eq_mc.stderr_ * eq_mc.stderr_ + dev.stderr_ * dev.stderr_);
          if (gap >= 3.0 * sigma)
            row.verdict = Verdict::Dominated;
          else if (gap <= -3.0 * sigma)
            row.verdict = Verdict::Profitable;
          else
            row.verdict = Verdict::Inconclusive;
        }
        if (row.verdict != Verdict::Dominated) report.all_dominated = false;
        if (row.verdict == Verdict::Profitable) report.any_profitable = true;
        if (row.verdict == Verdict::Inconclusive) report.any_inconclusive = true;
        report.deviations.push_back(std::move(row));
      }
    }
    if (!round_feasible) break;
  }
  return report;
}

}  // namespace bftgame
