#pragma once

#include <optional>
#include <vector>

#include "bftgame/game.hpp"

namespace bftgame {

struct PlayerRealization {
  bool checked = false;
  bool sent = false;
};

struct RoundRecord {
  int round = 0;
  int proposer_index = 0;  // equals round under round-robin
  PlayerType proposer_type = PlayerType::Rational;
  bool block_valid = false;
  std::vector<PlayerRealization> actions;  // entry k is player k+1
  int message_count = 0;
  bool accepted = false;  // message_count >= nu
};

struct ExecutionTrace {
  GameParams params;
  ByzantineAssignment assignment;
  std::vector<RoundRecord> rounds;
  int termination_round = 0;  // T; equals n when no block is accepted
  std::optional<bool> accepted_block_valid;

  bool accepted() const { return accepted_block_valid.has_value(); }
};

// Integer decomposition of one player's realized utility. Keeping the
// coefficients integral lets enumeration sums stay in integer arithmetic
// until the final combination with the rational cost constants.
struct UtilityCounts {
  long long rewarded = 0;   // 0 or 1
  long long checks = 0;
  long long sends = 0;
  long long penalized = 0;  // 0 or 1

  UtilityCounts& operator+=(const UtilityCounts& o) {
    rewarded += o.rewarded;
    checks += o.checks;
    sends += o.sends;
    penalized += o.penalized;
    return *this;
  }
};

// rewarded*R - checks*c_check - sends*c_send - penalized*kappa.
Rational combine_utility(const GameParams& p, const UtilityCounts& c);

// Realized utility components of `player` counting rounds >= from_round only
// (the continuation payoff W_{i,t} when from_round = t).
UtilityCounts utility_counts(const ExecutionTrace& trace, int player, int from_round = 1);

struct LedgerEntry {
  int player = 0;
  Rational reward;
  Rational check_cost;
  Rational send_cost;
  Rational penalty;
  Rational net;
};

struct PayoffLedger {
  std::vector<LedgerEntry> entries;  // rational players only, ascending index
  const LedgerEntry* find(int player) const;
};

struct RunResult {
  ExecutionTrace trace;
  PayoffLedger ledger;
};

// Fixed Byzantine strategy: as proposer, propose an invalid block; as
// receiver, check and vote iff the block is invalid.
RoundAction byzantine_action(int player, const InfoSet& h);

// Executes one height: round t's proposer is player t, realized actions
// follow the profile (Byzantine indexes are bound to byzantine_action),
// acceptance iff the vote count reaches nu. max_rounds = 0 means n.
RunResult run_height(const GameParams& p, const ByzantineAssignment& a,
                     const StrategyProfile& s, int max_rounds = 0);

// Canonical profiles.
StrategyProfile profile_prop1(const GameParams& p);
StrategyProfile profile_prop2(const GameParams& p);
StrategyProfile profile_prop4(const GameParams& p);  // requires f < nu < n - f

StrategyProfile profile_by_name(const GameParams& p, const std::string& name);

struct ConsensusVerdict {
  // Strong reading: a block was accepted and every rational player decided
  // (sent the accepted value at round T). Weak reading: a block was accepted.
  bool termination_all_decided = false;
  bool termination_accepted = false;
  bool agreement = true;
  bool validity = true;
};

ConsensusVerdict evaluate_consensus_properties(const ExecutionTrace& trace);

}  // namespace bftgame
