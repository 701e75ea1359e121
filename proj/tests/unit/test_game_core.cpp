#include <doctest.h>

#include "bftgame/game.hpp"
#include "bftgame/rational.hpp"

using namespace bftgame;

namespace {

GameParams base_params() {
  GameParams p;
  p.n = 10;
  p.f = 3;
  p.nu = 4;
  p.reward = 10;
  p.cost_check = 2;
  p.cost_send = 1;
  p.kappa = 20;
  return p;
}

}  // namespace

TEST_CASE("rational helpers") {
  CHECK(to_fraction_string(Rational(7)) == "7");
  CHECK(to_fraction_string(Rational(11, 9)) == "11/9");
  CHECK(parse_rational("7/2") == Rational(7, 2));
  CHECK(parse_rational("3.5") == Rational(7, 2));
  CHECK(parse_rational("-4") == Rational(-4));
  CHECK_THROWS_AS(parse_rational("abc"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational("1/0"), std::invalid_argument);
  CHECK(binomial(10, 3) == 120);
  CHECK(binomial(5, 0) == 1);
  CHECK(binomial(5, 6) == 0);
  CHECK(binomial(12, 6) == 924);
}

TEST_CASE("parameter validation enforces ranges and the cost ordering") {
  GameParams p = base_params();
  CHECK(!validate_params(p));

  SUBCASE("kappa below the reward breaks the ordering") {
    p.kappa = 5;
    auto err = validate_params(p);
    REQUIRE(err);
    CHECK(*err == Errc::OrderingViolated);
  }
  SUBCASE("check cheaper than send breaks the ordering") {
    p.cost_check = Rational(1, 2);
    REQUIRE(validate_params(p));
    CHECK(*validate_params(p) == Errc::OrderingViolated);
  }
  SUBCASE("zero send cost breaks the ordering") {
    p.cost_send = 0;
    CHECK(*validate_params(p) == Errc::OrderingViolated);
  }
  SUBCASE("f = n is out of range") {
    p.f = p.n;
    CHECK(*validate_params(p) == Errc::RangeViolated);
  }
  SUBCASE("nu above n is out of range") {
    p.nu = p.n + 1;
    CHECK(*validate_params(p) == Errc::RangeViolated);
  }
  SUBCASE("strict validation rejects f = 0, relaxed accepts it") {
    p.f = 0;
    CHECK(*validate_params(p) == Errc::RangeViolated);
    CHECK(!validate_params_relaxed(p));
  }
}

TEST_CASE("byzantine assignment helpers") {
  ByzantineAssignment a = ByzantineAssignment::worst_case(3);
  CHECK(a.indexes == std::vector<int>{1, 2, 3});
  CHECK(a.contains(2));
  CHECK(!a.contains(4));
  CHECK(a.highest_index() == 3);

  CHECK_NOTHROW(validate_assignment(a, 10, 3));
  CHECK_THROWS_AS(validate_assignment(a, 10, 2), GameError);
  ByzantineAssignment bad{{0, 2, 3}};
  CHECK_THROWS_AS(validate_assignment(bad, 10, 3), GameError);
  ByzantineAssignment dup{{2, 2, 3}};
  CHECK_THROWS_AS(validate_assignment(dup, 10, 3), GameError);
}

TEST_CASE("info sets accumulate per-round observations") {
  InfoSet h = initial_info_set(PlayerType::Rational);
  CHECK(h.round == 1);
  CHECK(h.validity_knowledge.empty());

  h = update_info_set(h, {3, false, true, false});  // checked an invalid block
  CHECK(h.round == 2);
  REQUIRE(h.validity_knowledge.size() == 1);
  CHECK(h.validity_knowledge[0] == Validity::Invalid);
  CHECK(h.messages_observed == std::vector<int>{3});
  CHECK(h.acceptance_history == std::vector<bool>{false});

  h = update_info_set(h, {2, false, false, true});  // did not check
  CHECK(h.round == 3);
  CHECK(h.validity_knowledge[1] == Validity::Unknown);
}

TEST_CASE("the six receiver behaviors are well-formed and distinct") {
  auto behaviors = all_receiver_behaviors();
  REQUIRE(behaviors.size() == 6);
  for (const RoundAction& b : behaviors) {
    CHECK(!b.propose_valid.has_value());
    CHECK(action_well_formed(b));
  }
  for (size_t i = 0; i < behaviors.size(); ++i)
    for (size_t j = i + 1; j < behaviors.size(); ++j)
      CHECK(!(behaviors[i] == behaviors[j]));

  // Conditional send rules require a check.
  RoundAction blind{std::nullopt, false, SendRule::SendIffValid};
  CHECK(!action_well_formed(blind));
}

TEST_CASE("action descriptions are stable") {
  CHECK(describe_action({std::nullopt, false, SendRule::AlwaysSend}) == "no-check/always-send");
  CHECK(describe_action({std::nullopt, true, SendRule::SendIffValid}) == "check/send-iff-valid");
  CHECK(describe_action({true, true, SendRule::SendIffValid}) ==
        "propose-valid check/send-iff-valid");
  CHECK(describe_action({false, false, SendRule::NeverSend}) ==
        "propose-invalid no-check/never-send");
}
