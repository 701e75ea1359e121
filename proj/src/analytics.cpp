#include "bftgame/analytics.hpp"

#include <algorithm>

namespace bftgame {

Rational property_p(int n, int f, int t, int boundary_round, const Rational& boundary_value) {
  if (n < 2 || f < 1 || f >= n)
    throw GameError(Errc::RangeError, "property_p: bad (n, f)");
  if (!(1 <= t && t <= boundary_round && boundary_round <= f + 1))
    throw GameError(Errc::RangeError, "property_p: t out of 1..boundary_round<=f+1");
  Rational g = boundary_value;
  for (int s = boundary_round - 1; s >= t; --s)
    g = 1 + Rational(f - s + 1, n - s + 1) * g;
  return g;
}

Rational phi(int n, int f, int t) {
  if (t < 1 || t > f) throw GameError(Errc::RangeError, "phi: t out of 1..f");
  return property_p(n, f, t, f, Rational(1));
}

Rational psi(int n, int f, int t) {
  if (t < 1 || t > f + 1) throw GameError(Errc::RangeError, "psi: t out of 1..f+1");
  return property_p(n, f, t, f + 1, Rational(1));
}

Rational pi_check(const GameParams& p, int t) {
  return p.reward - p.cost_send - phi(p.n, p.f, t) * p.cost_check;
}

Rational pi_send(const GameParams& p, int t) {
  return p.reward - psi(p.n, p.f, t) * p.cost_send;
}

Rational prob_iB_below(int n, int f, int nu, int t) {
  if (n < 2 || f < 1 || f >= n || nu < 1 || nu > n)
    throw GameError(Errc::RangeError, "prob_iB_below: bad (n, f, nu)");
  if (t < 1 || t > f) throw GameError(Errc::RangeError, "prob_iB_below: t out of 1..f");
  const int m = n - nu + f + 1;  // largest index allowed below the pivot bound
  if (m >= n) return Rational(1);
  // Rounds 1..t-1 had Byzantine proposers, so the remaining f-t+1 Byzantines
  // are a uniform subset of {t, ..., n}.
  BigInt favourable = binomial(m - t + 1, f - t + 1);
  BigInt total = binomial(n - t + 1, f - t + 1);
  if (total == 0) throw GameError(Errc::RangeError, "prob_iB_below: empty conditioning");
  return Rational(favourable, total);
}

Rational alpha(const GameParams& p, int t) {
  if (t >= p.f || t < 1) throw GameError(Errc::RangeError, "alpha: requires 1 <= t < f");
  const Rational q = prob_iB_below(p.n, p.f, p.nu, t);
  if (q == 0) throw GameError(Errc::DivisionByZero, "alpha: Pr(i_B < bound) = 0");
  const Rational numerator = Rational(p.n - t + 1) * phi(p.n, p.f, t) -
                             Rational(p.f - t + 1) * (1 - q) * phi(p.n, p.f, t + 1);
  return numerator / (Rational(p.f - t + 1) * q);
}

Rational beta(const GameParams& p, int t) {
  if (t >= p.f || t < 1) throw GameError(Errc::RangeError, "beta: requires 1 <= t < f");
  const Rational q = prob_iB_below(p.n, p.f, p.nu, t);
  if (q == 0) throw GameError(Errc::DivisionByZero, "beta: Pr(i_B < bound) = 0");
  return (1 - q) / q;
}

std::optional<Rational> kappa_threshold(const GameParams& p) {
  if (p.f < 1) throw GameError(Errc::RangeError, "kappa_threshold: f >= 1 required");
  std::optional<Rational> best;
  for (int t = 1; t < p.f; ++t) {
    Rational bound = alpha(p, t) * p.cost_check - beta(p, t) * p.cost_send;
    if (!best || bound > *best) best = bound;
  }
  return best;  // empty when f = 1: the condition is vacuous
}

Rational reward_threshold(const GameParams& p) {
  if (p.n <= p.f) throw GameError(Errc::RangeError, "reward_threshold: n > f required");
  const Rational ratio(p.n, p.n - p.f);
  return std::max(Rational(ratio * p.cost_send), Rational(p.cost_send + ratio * p.cost_check));
}

const char* regime_name(Regime r) {
  switch (r) {
    case Regime::InvalidAcceptance: return "InvalidAcceptance";
    case Regime::CoordinationFailureExists: return "CoordinationFailureExists";
    case Regime::ValidityAndTermination: return "ValidityAndTermination";
    case Regime::NoByzantine: return "NoByzantine";
    case Regime::Unclassified: return "Unclassified";
  }
  return "Unclassified";
}

RegimeClassification classify_regime(const GameParams& p) {
  if (p.n < 2 || p.f < 0 || p.f >= p.n || p.nu < 1 || p.nu > p.n)
    throw GameError(Errc::RangeViolated, "classify_regime: bad (n, f, nu)");

  RegimeClassification rc;
  auto note = [&rc](std::string cond, bool holds) {
    rc.conditions_checked.push_back({std::move(cond), holds});
    return holds;
  };

  if (p.f == 0) {
    if (note("f = 0 and nu = 1", p.nu == 1)) {
      rc.regimes.push_back(Regime::NoByzantine);
      rc.predicted.push_back({Regime::NoByzantine, true, true});
    }
  } else {
    const bool prop1 = note("n - f >= nu + 1", p.n - p.f >= p.nu + 1) &
                       note("f >= nu", p.f >= p.nu);
    if (prop1) {
      rc.regimes.push_back(Regime::InvalidAcceptance);
      rc.predicted.push_back({Regime::InvalidAcceptance, true, false});
    }

    const bool f_below_nu = note("f < nu", p.f < p.nu);
    if (f_below_nu & note("n - f >= nu", p.n - p.f >= p.nu)) {
      rc.regimes.push_back(Regime::CoordinationFailureExists);
      rc.predicted.push_back({Regime::CoordinationFailureExists, false, true});
    }

    if (f_below_nu & note("n - f > nu", p.n - p.f > p.nu)) {
      rc.reward_margin = p.reward - reward_threshold(p);
      bool kappa_ok = true;
      if (auto threshold = kappa_threshold(p)) {
        rc.kappa_margin = p.kappa - *threshold;
        kappa_ok = p.kappa > *threshold;
      }
      const bool thresholds = note("kappa > kappa_threshold", kappa_ok) &
                              note("R >= reward_threshold", *rc.reward_margin >= 0);
      if (thresholds) {
        rc.regimes.push_back(Regime::ValidityAndTermination);
        rc.predicted.push_back({Regime::ValidityAndTermination, true, true});
      }
    }
  }

  if (rc.regimes.empty()) {
    rc.regimes.push_back(Regime::Unclassified);
    rc.predicted.push_back({Regime::Unclassified, false, false});
  }
  return rc;
}

}  // namespace bftgame
