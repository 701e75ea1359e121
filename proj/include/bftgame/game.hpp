#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "bftgame/errors.hpp"
#include "bftgame/rational.hpp"

namespace bftgame {

// ---------------------------------------------------------------------------
// Game constants for one consensus height.
// ---------------------------------------------------------------------------
struct GameParams {
  int n = 0;   // committee size
  int f = 0;   // number of Byzantine players
  int nu = 0;  // majority threshold: votes required for acceptance

  Rational reward;      // R, paid to senders at the accepted round
  Rational cost_check;  // c_check
  Rational cost_send;   // c_send
  Rational kappa;       // cost to every rational player of an accepted invalid block

  std::string height_label;  // opaque; carried but never interpreted
};

// Standing assumption: n >= 2, 1 <= f < n, 1 <= nu <= n and
// kappa > R > c_check > c_send > 0.
std::optional<Errc> validate_params(const GameParams& p);

// Engine-side variant: accepts the degenerate f = 0 committee.
std::optional<Errc> validate_params_relaxed(const GameParams& p);

enum class PlayerType : std::uint8_t { Byzantine, Rational };

// ---------------------------------------------------------------------------
// Byzantine index assignment.
// ---------------------------------------------------------------------------
struct ByzantineAssignment {
  // Sorted, distinct, 1-based indexes; size must equal params.f.
  std::vector<int> indexes;

  static ByzantineAssignment worst_case(int f);  // {1, ..., f}

  bool contains(int player) const;
  // i_B, the highest Byzantine index. Requires a non-empty assignment.
  int highest_index() const;
};

// Throws RangeViolated unless the assignment has f distinct indexes in 1..n.
void validate_assignment(const ByzantineAssignment& a, int n, int f);

enum class Validity : std::uint8_t { Unknown, Invalid, Valid };

// ---------------------------------------------------------------------------
// Per-player observable history.
// ---------------------------------------------------------------------------
struct InfoSet {
  int round = 1;
  PlayerType own_type = PlayerType::Rational;
  // Entry per past round; Unknown unless the player checked in that round.
  std::vector<Validity> validity_knowledge;
  std::vector<int> messages_observed;    // vote count per past round
  std::vector<bool> acceptance_history;  // accepted flag per past round
};

InfoSet initial_info_set(PlayerType type);

struct RoundOutcome {
  int messages = 0;
  bool accepted = false;
  bool checked = false;      // did this player check
  bool block_valid = false;  // meaningful only when checked
};

// Appends the outcome of round h.round and advances to round h.round + 1.
// Must not be called when the outcome accepted a block (the game has ended).
InfoSet update_info_set(const InfoSet& h, const RoundOutcome& outcome);

// ---------------------------------------------------------------------------
// Round actions: the six leaf behaviors of the decision tree, plus the
// proposer's validity choice.
// ---------------------------------------------------------------------------
enum class SendRule : std::uint8_t { NeverSend, AlwaysSend, SendIffValid, SendIffInvalid };

struct RoundAction {
  std::optional<bool> propose_valid;  // present only for the round's proposer
  bool check = false;
  SendRule send = SendRule::NeverSend;

  bool operator==(const RoundAction&) const = default;
};

// Conditional send rules require check = true.
bool action_well_formed(const RoundAction& a);

// The six representable non-proposer behaviors, in a fixed order.
std::vector<RoundAction> all_receiver_behaviors();

std::string describe_action(const RoundAction& a);

// ---------------------------------------------------------------------------
// Strategy profiles. Strategies are deterministic functions of the
// information set (pure-strategy equilibria only); the player index is
// passed alongside because the canonical profiles are index-dependent.
// ---------------------------------------------------------------------------
using Strategy = std::function<RoundAction(int player, const InfoSet& h)>;

struct StrategyProfile {
  std::string name;                   // "prop1" | "prop2" | "prop4" | custom
  std::vector<Strategy> per_player;   // size n; entry k is the strategy of player k+1

  const Strategy& strategy_of(int player) const { return per_player.at(player - 1); }
};

StrategyProfile uniform_profile(int n, std::string name, Strategy s);

}  // namespace bftgame
