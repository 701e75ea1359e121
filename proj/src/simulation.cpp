#include "bftgame/simulation.hpp"

#include <algorithm>

namespace bftgame {

Rational combine_utility(const GameParams& p, const UtilityCounts& c) {
  return Rational(c.rewarded) * p.reward - Rational(c.checks) * p.cost_check -
         Rational(c.sends) * p.cost_send - Rational(c.penalized) * p.kappa;
}

UtilityCounts utility_counts(const ExecutionTrace& trace, int player, int from_round) {
  UtilityCounts counts;
  for (const RoundRecord& rec : trace.rounds) {
    if (rec.round < from_round) continue;
    const PlayerRealization& r = rec.actions[static_cast<size_t>(player - 1)];
    if (r.checked) ++counts.checks;
    if (r.sent) ++counts.sends;
    if (rec.accepted) {
      if (r.sent) counts.rewarded = 1;
      if (!rec.block_valid) counts.penalized = 1;
    }
  }
  return counts;
}

const LedgerEntry* PayoffLedger::find(int player) const {
  for (const LedgerEntry& e : entries)
    if (e.player == player) return &e;
  return nullptr;
}

RoundAction byzantine_action(int player, const InfoSet& h) {
  RoundAction a;
  if (player == h.round) a.propose_valid = false;
  a.check = true;
  a.send = SendRule::SendIffInvalid;
  return a;
}

RunResult run_height(const GameParams& p, const ByzantineAssignment& a,
                     const StrategyProfile& s, int max_rounds) {
  if (auto err = validate_params_relaxed(p))
    throw GameError(*err, "run_height called with invalid parameters");
  validate_assignment(a, p.n, p.f);
  if (static_cast<int>(s.per_player.size()) != p.n)
    throw GameError(Errc::RangeViolated, "profile not defined for every player");
  if (max_rounds <= 0 || max_rounds > p.n) max_rounds = p.n;

  ExecutionTrace trace;
  trace.params = p;
  trace.assignment = a;

  std::vector<InfoSet> history;
  history.reserve(static_cast<size_t>(p.n));
  for (int i = 1; i <= p.n; ++i)
    history.push_back(initial_info_set(a.contains(i) ? PlayerType::Byzantine
                                                     : PlayerType::Rational));

  bool accepted = false;
  for (int t = 1; t <= max_rounds && !accepted; ++t) {
    RoundRecord rec;
    rec.round = t;
    rec.proposer_index = t;
    const bool proposer_byzantine = a.contains(t);
    rec.proposer_type = proposer_byzantine ? PlayerType::Byzantine : PlayerType::Rational;

    std::vector<RoundAction> actions(static_cast<size_t>(p.n));
    for (int i = 1; i <= p.n; ++i) {
      const InfoSet& h = history[static_cast<size_t>(i - 1)];
      RoundAction act = a.contains(i) ? byzantine_action(i, h) : s.strategy_of(i)(i, h);
      if (!a.contains(i) && !action_well_formed(act))
        throw GameError(Errc::StrategyDomainError,
                        "conditional send rule without check (player " + std::to_string(i) +
                            ", round " + std::to_string(t) + ")");
      actions[static_cast<size_t>(i - 1)] = act;
    }

    const RoundAction& proposer_act = actions[static_cast<size_t>(t - 1)];
    rec.block_valid = proposer_byzantine ? false : proposer_act.propose_valid.value_or(true);

    rec.actions.resize(static_cast<size_t>(p.n));
    int senders = 0;
    for (int i = 1; i <= p.n; ++i) {
      const RoundAction& act = actions[static_cast<size_t>(i - 1)];
      PlayerRealization r;
      r.checked = act.check;
      switch (act.send) {
        case SendRule::NeverSend: r.sent = false; break;
        case SendRule::AlwaysSend: r.sent = true; break;
        case SendRule::SendIffValid: r.sent = act.check && rec.block_valid; break;
        case SendRule::SendIffInvalid: r.sent = act.check && !rec.block_valid; break;
      }
      if (r.sent) ++senders;
      rec.actions[static_cast<size_t>(i - 1)] = r;
    }
    rec.message_count = senders;
    rec.accepted = senders >= p.nu;
    accepted = rec.accepted;
    if (accepted) {
      trace.termination_round = t;
      trace.accepted_block_valid = rec.block_valid;
    }

    // Symmetric Byzantines: every player observes the same message count.
    for (int i = 1; i <= p.n; ++i) {
      const PlayerRealization& r = rec.actions[static_cast<size_t>(i - 1)];
      if (!accepted)
        history[static_cast<size_t>(i - 1)] = update_info_set(
            history[static_cast<size_t>(i - 1)],
            {rec.message_count, rec.accepted, r.checked, rec.block_valid});
    }
    trace.rounds.push_back(std::move(rec));
  }

  if (!accepted) trace.termination_round = p.n;

  RunResult result;
  result.trace = std::move(trace);
  for (int i = 1; i <= p.n; ++i) {
    if (a.contains(i)) continue;
    UtilityCounts c = utility_counts(result.trace, i);
    LedgerEntry e;
    e.player = i;
    e.reward = Rational(c.rewarded) * p.reward;
    e.check_cost = Rational(c.checks) * p.cost_check;
    e.send_cost = Rational(c.sends) * p.cost_send;
    e.penalty = Rational(c.penalized) * p.kappa;
    e.net = e.reward - e.check_cost - e.send_cost - e.penalty;
    result.ledger.entries.push_back(std::move(e));
  }
  return result;
}

namespace {

// Equilibrium-profile proposers check their own block: learning validity
// requires executing the check, and the closed-form payoff model charges
// the proposer c_check accordingly.
RoundAction rational_proposer_action() {
  RoundAction a;
  a.propose_valid = true;
  a.check = true;
  a.send = SendRule::SendIffValid;
  return a;
}

}  // namespace

StrategyProfile profile_prop1(const GameParams& p) {
  return uniform_profile(p.n, "prop1", [](int player, const InfoSet& h) {
    if (player == h.round) return rational_proposer_action();
    return RoundAction{std::nullopt, false, SendRule::AlwaysSend};
  });
}

StrategyProfile profile_prop2(const GameParams& p) {
  return uniform_profile(p.n, "prop2", [](int player, const InfoSet& h) {
    RoundAction a{std::nullopt, false, SendRule::NeverSend};
    if (player == h.round) a.propose_valid = true;
    return a;
  });
}

StrategyProfile profile_prop4(const GameParams& p) {
  if (!(p.f < p.nu && p.n - p.f > p.nu))
    throw GameError(Errc::PreconditionViolated, "prop4 profile requires f < nu < n - f");
  const int f = p.f;
  const int checker_bound = p.n - p.nu + p.f + 1;  // highest checker index
  return uniform_profile(p.n, "prop4", [f, checker_bound](int player, const InfoSet& h) {
    const int t = h.round;
    if (t <= f) {
      if (player == t) return rational_proposer_action();
      if (player <= checker_bound)
        return RoundAction{std::nullopt, true, SendRule::SendIffValid};
      return RoundAction{std::nullopt, false, SendRule::AlwaysSend};
    }
    // From round f+1 on, receivers send without checking; the proposer
    // still checks its own block before voting.
    if (player == t) return rational_proposer_action();
    return RoundAction{std::nullopt, false, SendRule::AlwaysSend};
  });
}

StrategyProfile profile_by_name(const GameParams& p, const std::string& name) {
  if (name == "prop1") return profile_prop1(p);
  if (name == "prop2") return profile_prop2(p);
  if (name == "prop4") return profile_prop4(p);
  throw GameError(Errc::ScenarioError, "unknown profile '" + name + "'");
}

ConsensusVerdict evaluate_consensus_properties(const ExecutionTrace& trace) {
  ConsensusVerdict v;
  v.termination_accepted = trace.accepted();
  // Agreement holds by construction: at most one round accepts and every
  // round carries a single proposed value.
  v.agreement = true;
  v.validity = !trace.accepted() || *trace.accepted_block_valid;
  v.termination_all_decided = false;
  if (trace.accepted()) {
    const RoundRecord& last = trace.rounds.back();
    v.termination_all_decided = true;
    for (int i = 1; i <= trace.params.n; ++i) {
      if (trace.assignment.contains(i)) continue;
      if (!last.actions[static_cast<size_t>(i - 1)].sent) {
        v.termination_all_decided = false;
        break;
      }
    }
  }
  return v;
}

}  // namespace bftgame
