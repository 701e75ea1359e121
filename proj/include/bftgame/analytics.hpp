#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bftgame/game.hpp"

namespace bftgame {

// Backward recurrence g(t) = 1 + ((f-t+1)/(n-t+1)) * g(t+1), evaluated
// exactly from boundary_round down to t with g(boundary_round) = boundary_value.
Rational property_p(int n, int f, int t, int boundary_round, const Rational& boundary_value);

// Expected number of remaining validity checks before acceptance; phi(f) = 1.
Rational phi(int n, int f, int t);

// Expected number of remaining sends before acceptance; psi(f+1) = 1.
Rational psi(int n, int f, int t);

// Equilibrium continuation payoffs of checkers and free senders.
Rational pi_check(const GameParams& p, int t);  // R - c_send - phi(t) c_check
Rational pi_send(const GameParams& p, int t);   // R - psi(t) c_send

// Pr(i_B < n - nu + f + 2 | rounds 1..t-1 had Byzantine proposers), with the
// remaining f-t+1 Byzantines a uniform subset of {t, ..., n}.
Rational prob_iB_below(int n, int f, int nu, int t);

// Pivotality coefficients of the kappa condition; defined for t < f.
Rational alpha(const GameParams& p, int t);
Rational beta(const GameParams& p, int t);

// max over t in {1, ..., f-1} of alpha(t) c_check - beta(t) c_send.
// Empty when f = 1: the condition quantifies over an empty range.
std::optional<Rational> kappa_threshold(const GameParams& p);

// max[ n/(n-f) c_send, c_send + n/(n-f) c_check ].
Rational reward_threshold(const GameParams& p);

enum class Regime {
  InvalidAcceptance,         // n-f >= nu+1 and f >= nu
  CoordinationFailureExists, // f < nu and n-f >= nu
  ValidityAndTermination,    // f < nu < n-f plus the kappa and R conditions
  NoByzantine,               // f = 0 with nu = 1
  Unclassified,
};

const char* regime_name(Regime r);

struct ConditionCheck {
  std::string condition;
  bool holds = false;
};

struct PredictedProperties {
  Regime regime = Regime::Unclassified;
  bool termination = false;
  bool validity = false;
};

struct RegimeClassification {
  std::vector<Regime> regimes;  // all satisfied regimes; Unclassified alone if none
  std::vector<ConditionCheck> conditions_checked;
  std::vector<PredictedProperties> predicted;
  // Margins to the ValidityAndTermination boundary; kappa margin is absent
  // when f = 1 (vacuous condition).
  std::optional<Rational> kappa_margin;
  std::optional<Rational> reward_margin;
};

// Pure function of the parameters. Range invariants are enforced (f = 0
// allowed); the kappa ordering is relaxed so near-miss regimes still report.
RegimeClassification classify_regime(const GameParams& p);

}  // namespace bftgame
