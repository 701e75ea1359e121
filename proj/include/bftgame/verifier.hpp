#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "bftgame/simulation.hpp"

namespace bftgame {

// A one-shot deviation: a different action at exactly one (player, round);
// all other rounds follow the profile.
struct Deviation {
  int player = 0;
  int round = 0;
  RoundAction action;
};

// On-path conditioning: proposers of rounds 1..round-1 were Byzantine and no
// block was accepted. Beliefs are the uniform prior over all C(n, f) index
// subsets restricted to that event; the evaluated player itself always acts
// rationally (beliefs do not condition on its own type, matching the f/n
// round-1 hazard used throughout the closed forms).
struct Conditioning {
  int round = 1;  // evaluation round t; prefix length is t-1
};

inline constexpr int kDefaultExactBound = 12;

// Exact continuation payoff W_{i,t} by exhaustive enumeration of Byzantine
// subsets. Throws EnumerationTooLarge when n exceeds the bound and
// InfeasibleConditioning when no consistent subset reaches round t unaccepted.
Rational expected_utility_exact(const GameParams& p, const StrategyProfile& profile,
                                const Conditioning& cond, int player,
                                const std::optional<Deviation>& deviation = std::nullopt,
                                int exact_bound = kDefaultExactBound);

struct McEstimate {
  double estimate = 0.0;
  double stderr_ = 0.0;
  long long trials = 0;
};

// Seeded Monte-Carlo estimate of the same quantity. The RNG is split per
// trial index, so any parallel schedule yields identical results.
McEstimate expected_utility_mc(const GameParams& p, const StrategyProfile& profile,
                               const Conditioning& cond, int player,
                               const std::optional<Deviation>& deviation,
                               long long trials, std::uint64_t seed);

enum class Verdict { Dominated, Profitable, Inconclusive };

const char* verdict_name(Verdict v);

struct AnalyticMatch {
  std::string label;      // which closed-form expression this deviation reproduces
  Rational value;         // the closed form evaluated at these parameters
  Rational abs_diff;      // |oracle - closed form| (exact mode only)
};

struct DominanceReport {
  Deviation deviation;
  // Exact mode carries rationals; MC mode carries estimates.
  std::optional<Rational> equilibrium_exact;
  std::optional<Rational> deviation_exact;
  std::optional<McEstimate> equilibrium_mc;
  std::optional<McEstimate> deviation_mc;
  Verdict verdict = Verdict::Inconclusive;
  std::optional<AnalyticMatch> matched;
};

enum class VerifyMode { Exact, MonteCarlo };

struct VerifyOptions {
  VerifyMode mode = VerifyMode::Exact;
  int exact_bound = kDefaultExactBound;
  long long trials = 100000;
  std::uint64_t seed = 1;
};

struct VerificationReport {
  std::vector<DominanceReport> deviations;
  bool all_dominated = false;
  bool any_profitable = false;
  bool any_inconclusive = false;
};

// Closed-form payoffs of the analytic model for the canonical profiles;
// empty when no closed form covers the case.
std::optional<AnalyticMatch> analytic_equilibrium_expression(const GameParams& p,
                                                             const std::string& profile_name,
                                                             int t, int player);
std::optional<AnalyticMatch> analytic_deviation_expression(const GameParams& p,
                                                           const std::string& profile_name,
                                                           int t, int player,
                                                           const RoundAction& action);

// Enumerates every one-shot deviation (six receiver behaviors, plus the
// proposer's validity flip) for every feasible on-path round and every
// player that can be rational there, and checks dominance against the
// profile. Byzantine players are never deviators: the evaluated player is
// rational by construction. For canonical profiles the reports carry the
// matching closed-form expressions from the payoff analytics.
VerificationReport verify_equilibrium(const GameParams& p, const StrategyProfile& profile,
                                      const VerifyOptions& opts = {});

}  // namespace bftgame
