#pragma once

#include <string>

#include "bftgame/analytics.hpp"
#include "bftgame/simulation.hpp"
#include "bftgame/verifier.hpp"

namespace bftgame {

// Self-describing line-oriented text formats. Versioned headers, fixed field
// order, locale-independent; rationals serialize as "numerator/denominator".

std::string export_params(const GameParams& p);

std::string export_trace(const ExecutionTrace& trace, const PayoffLedger& ledger,
                         const ConsensusVerdict& verdict);
std::string export_trace_csv(const ExecutionTrace& trace);

std::string export_dominance(const GameParams& p, const std::string& profile_name,
                             const std::string& mode, const VerificationReport& report);
std::string export_dominance_csv(const VerificationReport& report);

std::string export_analytics(const GameParams& p);
std::string export_analytics_csv(const GameParams& p);

std::string export_classification(const GameParams& p, const RegimeClassification& rc);

}  // namespace bftgame
