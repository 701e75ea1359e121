#include <doctest.h>

#include <algorithm>
#include <vector>

#include "bftgame/analytics.hpp"

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

// Independent oracle: enumerate all (f - t + 1)-subsets of {t, ..., n} and
// count those whose maximum stays below n - nu + f + 2.
Rational brute_force_iB_below(int n, int f, int nu, int t) {
  const int bound = n - nu + f + 2;
  const int k = f - t + 1;
  std::vector<int> pool;
  for (int i = t; i <= n; ++i) pool.push_back(i);
  long long favourable = 0, total = 0;
  std::vector<bool> mask(pool.size(), false);
  std::fill(mask.end() - k, mask.end(), true);
  do {
    int max_idx = 0;
    for (size_t i = 0; i < pool.size(); ++i)
      if (mask[i]) max_idx = std::max(max_idx, pool[i]);
    ++total;
    if (max_idx < bound) ++favourable;
  } while (std::next_permutation(mask.begin(), mask.end()));
  return Rational(favourable, total);
}

}  // namespace

TEST_CASE("expected check counts at n=10, f=3") {
  CHECK(phi(10, 3, 3) == 1);
  CHECK(phi(10, 3, 2) == Rational(11, 9));
  CHECK(phi(10, 3, 1) == Rational(41, 30));
  CHECK(psi(10, 3, 4) == 1);
  CHECK(psi(10, 3, 3) == Rational(9, 8));
  CHECK_THROWS_AS(phi(10, 3, 4), GameError);
  CHECK_THROWS_AS(phi(10, 3, 0), GameError);
  CHECK_THROWS_AS(psi(10, 3, 5), GameError);
}

TEST_CASE("the backward recurrence identity holds at every round") {
  for (int n : {6, 9, 10, 12}) {
    for (int f = 1; f < n; ++f) {
      for (int t = 1; t < f; ++t) {
        Rational ratio(f - t + 1, n - t + 1);
        CHECK(phi(n, f, t) == 1 + ratio * phi(n, f, t + 1));
      }
      for (int t = 1; t <= f; ++t) {
        Rational ratio(f - t + 1, n - t + 1);
        CHECK(psi(n, f, t) == 1 + ratio * psi(n, f, t + 1));
      }
    }
  }
}

TEST_CASE("continuation payoffs at n=10, f=3") {
  GameParams p = params(10, 3, 4);
  CHECK(pi_check(p, 3) == 7);
  CHECK(pi_check(p, 2) == Rational(59, 9));
  CHECK(pi_check(p, 1) == Rational(94, 15));
  CHECK(pi_send(p, 4) == 9);
  CHECK(pi_send(p, 3) == Rational(71, 8));
}

TEST_CASE("highest-byzantine-index probability matches brute force") {
  CHECK(prob_iB_below(6, 2, 4, 1) == Rational(2, 3));
  CHECK(prob_iB_below(6, 2, 4, 2) == Rational(4, 5));
  for (int n = 3; n <= 9; ++n)
    for (int f = 1; f < n; ++f)
      for (int nu = 1; nu <= n; ++nu)
        for (int t = 1; t <= f; ++t)
          CHECK(prob_iB_below(n, f, nu, t) == brute_force_iB_below(n, f, nu, t));
}

TEST_CASE("pivotality coefficients") {
  GameParams p = params(6, 2, 4);
  CHECK(beta(p, 1) == Rational(1, 2));
  CHECK_THROWS_AS(alpha(p, 2), GameError);  // defined only for t < f

  // alpha satisfies its defining decomposition:
  // phi(t) = ((f-t+1)/(n-t+1)) * (q * alpha(t) + (1-q) * phi(t+1)).
  for (auto [n, f, nu] : std::vector<std::array<int, 3>>{{10, 3, 4}, {9, 3, 4}, {12, 4, 5}}) {
    GameParams q = params(n, f, nu);
    for (int t = 1; t < f; ++t) {
      Rational pr = prob_iB_below(n, f, nu, t);
      Rational lhs = Rational(n - t + 1, f - t + 1) * phi(n, f, t);
      CHECK(lhs == pr * alpha(q, t) + (1 - pr) * phi(n, f, t + 1));
    }
  }
}

TEST_CASE("thresholds") {
  GameParams p = params(10, 3, 4);
  CHECK(reward_threshold(p) == Rational(27, 7));
  auto kt = kappa_threshold(p);
  REQUIRE(kt);
  CHECK(*kt == 11);

  GameParams single = params(10, 1, 4);
  CHECK(!kappa_threshold(single));  // vacuous: no round t < f exists
}

TEST_CASE("regime classification") {
  SUBCASE("invalid acceptance") {
    auto rc = classify_regime(params(10, 4, 4));
    REQUIRE(!rc.regimes.empty());
    CHECK(rc.regimes[0] == Regime::InvalidAcceptance);
    CHECK(rc.predicted[0].termination);
    CHECK(!rc.predicted[0].validity);
  }
  SUBCASE("coordination failure plus full guarantees") {
    auto rc = classify_regime(params(10, 3, 4));
    REQUIRE(rc.regimes.size() == 2);
    CHECK(rc.regimes[0] == Regime::CoordinationFailureExists);
    CHECK(rc.regimes[1] == Regime::ValidityAndTermination);
    REQUIRE(rc.kappa_margin);
    CHECK(*rc.kappa_margin == 9);
    REQUIRE(rc.reward_margin);
    CHECK(*rc.reward_margin == Rational(43, 7));
  }
  SUBCASE("no byzantines") {
    GameParams p = params(10, 0, 1);
    auto rc = classify_regime(p);
    REQUIRE(rc.regimes.size() == 1);
    CHECK(rc.regimes[0] == Regime::NoByzantine);
  }
  SUBCASE("unclassified corner") {
    // f < nu but n - f < nu: neither regime's conditions hold.
    auto rc = classify_regime(params(10, 4, 8));
    REQUIRE(rc.regimes.size() == 1);
    CHECK(rc.regimes[0] == Regime::Unclassified);
  }
  SUBCASE("kappa below threshold loses the guarantee regime") {
    GameParams p = params(10, 3, 4);
    p.kappa = Rational(21, 2);  // above R, below the threshold of 11
    auto rc = classify_regime(p);
    REQUIRE(rc.regimes.size() == 1);
    CHECK(rc.regimes[0] == Regime::CoordinationFailureExists);
    REQUIRE(rc.kappa_margin);
    CHECK(*rc.kappa_margin == Rational(-1, 2));
  }
}
