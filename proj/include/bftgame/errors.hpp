#pragma once

#include <stdexcept>
#include <string>

namespace bftgame {

enum class Errc {
  OrderingViolated,       // kappa > R > c_check > c_send > 0 broken
  RangeViolated,          // n / f / nu out of range
  StrategyDomainError,    // conditional send rule without a check
  PreconditionViolated,   // operation called outside its parameter regime
  RangeError,             // recurrence / probability argument out of domain
  DivisionByZero,         // alpha/beta with zero conditioning probability
  InfeasibleConditioning, // no Byzantine subset consistent with the prefix
  EnumerationTooLarge,    // exact mode requested above the n bound
  ScenarioError,          // malformed scenario / grid configuration
};

const char* errc_name(Errc code);

class GameError : public std::runtime_error {
 public:
  GameError(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const { return code_; }

 private:
  Errc code_;
};

}  // namespace bftgame
