#include "bftgame/game.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace bftgame {

const char* errc_name(Errc code) {
  switch (code) {
    case Errc::OrderingViolated: return "OrderingViolated";
    case Errc::RangeViolated: return "RangeViolated";
    case Errc::StrategyDomainError: return "StrategyDomainError";
    case Errc::PreconditionViolated: return "PreconditionViolated";
    case Errc::RangeError: return "RangeError";
    case Errc::DivisionByZero: return "DivisionByZero";
    case Errc::InfeasibleConditioning: return "InfeasibleConditioning";
    case Errc::EnumerationTooLarge: return "EnumerationTooLarge";
    case Errc::ScenarioError: return "ScenarioError";
  }
  return "UnknownError";
}

namespace {

std::optional<Errc> validate_common(const GameParams& p, int min_f) {
  if (p.n < 2 || p.f < min_f || p.f >= p.n || p.nu < 1 || p.nu > p.n)
    return Errc::RangeViolated;
  if (!(p.kappa > p.reward && p.reward > p.cost_check && p.cost_check > p.cost_send &&
        p.cost_send > 0))
    return Errc::OrderingViolated;
  return std::nullopt;
}

}  // namespace

std::optional<Errc> validate_params(const GameParams& p) { return validate_common(p, 1); }

std::optional<Errc> validate_params_relaxed(const GameParams& p) {
  return validate_common(p, 0);
}

ByzantineAssignment ByzantineAssignment::worst_case(int f) {
  ByzantineAssignment a;
  a.indexes.resize(static_cast<size_t>(std::max(f, 0)));
  std::iota(a.indexes.begin(), a.indexes.end(), 1);
  return a;
}

bool ByzantineAssignment::contains(int player) const {
  return std::binary_search(indexes.begin(), indexes.end(), player);
}

int ByzantineAssignment::highest_index() const {
  if (indexes.empty()) throw GameError(Errc::RangeViolated, "empty assignment has no i_B");
  return indexes.back();
}

void validate_assignment(const ByzantineAssignment& a, int n, int f) {
  if (static_cast<int>(a.indexes.size()) != f)
    throw GameError(Errc::RangeViolated, "assignment cardinality differs from f");
  std::set<int> distinct(a.indexes.begin(), a.indexes.end());
  if (static_cast<int>(distinct.size()) != f)
    throw GameError(Errc::RangeViolated, "assignment indexes must be distinct");
  if (f > 0 && (*distinct.begin() < 1 || *distinct.rbegin() > n))
    throw GameError(Errc::RangeViolated, "assignment index out of 1..n");
}

InfoSet initial_info_set(PlayerType type) {
  InfoSet h;
  h.round = 1;
  h.own_type = type;
  return h;
}

InfoSet update_info_set(const InfoSet& h, const RoundOutcome& outcome) {
  InfoSet next = h;
  next.validity_knowledge.push_back(
      outcome.checked ? (outcome.block_valid ? Validity::Valid : Validity::Invalid)
                      : Validity::Unknown);
  next.messages_observed.push_back(outcome.messages);
  next.acceptance_history.push_back(outcome.accepted);
  next.round = h.round + 1;
  return next;
}

bool action_well_formed(const RoundAction& a) {
  if (a.send == SendRule::SendIffValid || a.send == SendRule::SendIffInvalid) return a.check;
  return true;
}

std::vector<RoundAction> all_receiver_behaviors() {
  return {
      {std::nullopt, false, SendRule::NeverSend},
      {std::nullopt, false, SendRule::AlwaysSend},
      {std::nullopt, true, SendRule::NeverSend},
      {std::nullopt, true, SendRule::AlwaysSend},
      {std::nullopt, true, SendRule::SendIffValid},
      {std::nullopt, true, SendRule::SendIffInvalid},
  };
}

std::string describe_action(const RoundAction& a) {
  std::string s;
  if (a.propose_valid.has_value())
    s += *a.propose_valid ? "propose-valid " : "propose-invalid ";
  s += a.check ? "check" : "no-check";
  switch (a.send) {
    case SendRule::NeverSend: s += "/never-send"; break;
    case SendRule::AlwaysSend: s += "/always-send"; break;
    case SendRule::SendIffValid: s += "/send-iff-valid"; break;
    case SendRule::SendIffInvalid: s += "/send-iff-invalid"; break;
  }
  return s;
}

StrategyProfile uniform_profile(int n, std::string name, Strategy s) {
  StrategyProfile profile;
  profile.name = std::move(name);
  profile.per_player.assign(static_cast<size_t>(n), s);
  return profile;
}

}  // namespace bftgame
