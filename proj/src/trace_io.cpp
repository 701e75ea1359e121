#include "bftgame/trace_io.hpp"

#include <sstream>

namespace bftgame {

namespace {

std::string join_indexes(const std::vector<int>& xs) {
  std::string s;
  for (size_t i = 0; i < xs.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(xs[i]);
  }
  return s.empty() ? "none" : s;
}

std::string bitstring(const std::vector<PlayerRealization>& actions, bool PlayerRealization::*field) {
  std::string s;
  s.reserve(actions.size());
  for (const auto& a : actions) s += (a.*field) ? '1' : '0';
  return s;
}

void append_decimal(std::ostream& os, const Rational& r) {
  os << to_fraction_string(r) << " (" << to_double(r) << ")";
}

}  // namespace

std::string export_params(const GameParams& p) {
  std::ostringstream os;
  os << "n=" << p.n << " f=" << p.f << " nu=" << p.nu << "\n"
     << "reward=" << to_fraction_string(p.reward)
     << " cost_check=" << to_fraction_string(p.cost_check)
     << " cost_send=" << to_fraction_string(p.cost_send)
     << " kappa=" << to_fraction_string(p.kappa) << "\n"
     << "height=" << (p.height_label.empty() ? "default" : p.height_label) << "\n";
  return os.str();
}

std::string export_trace(const ExecutionTrace& trace, const PayoffLedger& ledger,
                         const ConsensusVerdict& verdict) {
  std::ostringstream os;
  os << "bftgame-trace v1\n" << export_params(trace.params);
  os << "byzantine=" << join_indexes(trace.assignment.indexes) << "\n";
  for (const RoundRecord& rec : trace.rounds) {
    os << "round=" << rec.round << " proposer=" << rec.proposer_index << " proposer_type="
       << (rec.proposer_type == PlayerType::Byzantine ? "byzantine" : "rational")
       << " block_valid=" << (rec.block_valid ? 1 : 0) << " messages=" << rec.message_count
       << " accepted=" << (rec.accepted ? 1 : 0)
       << " checked=" << bitstring(rec.actions, &PlayerRealization::checked)
       << " sent=" << bitstring(rec.actions, &PlayerRealization::sent) << "\n";
  }
  os << "termination_round=" << trace.termination_round << "\n";
  os << "accepted_block_valid="
     << (trace.accepted_block_valid ? (*trace.accepted_block_valid ? "1" : "0") : "none")
     << "\n";
  for (const LedgerEntry& e : ledger.entries) {
    os << "ledger player=" << e.player << " reward=" << to_fraction_string(e.reward)
       << " check_cost=" << to_fraction_string(e.check_cost)
       << " send_cost=" << to_fraction_string(e.send_cost)
       << " penalty=" << to_fraction_string(e.penalty)
       << " net=" << to_fraction_string(e.net) << "\n";
  }
  os << "properties termination_accepted=" << (verdict.termination_accepted ? 1 : 0)
     << " termination_all_decided=" << (verdict.termination_all_decided ? 1 : 0)
     << " agreement=" << (verdict.agreement ? 1 : 0)
     << " validity=" << (verdict.validity ? 1 : 0) << "\n";
  return os.str();
}

std::string export_trace_csv(const ExecutionTrace& trace) {
  std::ostringstream os;
  os << "round,proposer,proposer_type,block_valid,messages,accepted,checked,sent\n";
  for (const RoundRecord& rec : trace.rounds) {
    os << rec.round << "," << rec.proposer_index << ","
       << (rec.proposer_type == PlayerType::Byzantine ? "byzantine" : "rational") << ","
       << (rec.block_valid ? 1 : 0) << "," << rec.message_count << ","
       << (rec.accepted ? 1 : 0) << "," << bitstring(rec.actions, &PlayerRealization::checked)
       << "," << bitstring(rec.actions, &PlayerRealization::sent) << "\n";
  }
  return os.str();
}

namespace {

void append_side(std::ostream& os, const char* tag, const std::optional<Rational>& exact,
                 const std::optional<McEstimate>& mc) {
  if (exact) {
    os << " " << tag << "=" << to_fraction_string(*exact);
  } else if (mc) {
    os << " " << tag << "=" << mc->estimate << " " << tag << "_stderr=" << mc->stderr_;
  }
}

}  // namespace

std::string export_dominance(const GameParams& p, const std::string& profile_name,
                             const std::string& mode, const VerificationReport& report) {
  std::ostringstream os;
  os << "bftgame-dominance v1\n" << export_params(p);
  os << "profile=" << profile_name << " mode=" << mode << "\n";
  for (const DominanceReport& row : report.deviations) {
    os << "deviation player=" << row.deviation.player << " round=" << row.deviation.round
       << " action=" << describe_action(row.deviation.action);
    append_side(os, "eq", row.equilibrium_exact, row.equilibrium_mc);
    append_side(os, "dev", row.deviation_exact, row.deviation_mc);
    os << " verdict=" << verdict_name(row.verdict);
    if (row.matched) {
      os << " analytic=" << row.matched->label
         << " analytic_value=" << to_fraction_string(row.matched->value)
         << " abs_diff=" << to_fraction_string(row.matched->abs_diff);
    }
    os << "\n";
  }
  os << "summary all_dominated=" << (report.all_dominated ? 1 : 0)
     << " any_profitable=" << (report.any_profitable ? 1 : 0)
     << " any_inconclusive=" << (report.any_inconclusive ? 1 : 0) << "\n";
  return os.str();
}

std::string export_dominance_csv(const VerificationReport& report) {
  std::ostringstream os;
  os << "player,round,action,eq,dev,verdict,analytic,analytic_value,abs_diff\n";
  for (const DominanceReport& row : report.deviations) {
    os << row.deviation.player << "," << row.deviation.round << ","
       << describe_action(row.deviation.action) << ",";
    if (row.equilibrium_exact)
      os << to_fraction_string(*row.equilibrium_exact);
    else if (row.equilibrium_mc)
      os << row.equilibrium_mc->estimate;
    os << ",";
    if (row.deviation_exact)
      os << to_fraction_string(*row.deviation_exact);
    else if (row.deviation_mc)
      os << row.deviation_mc->estimate;
    os << "," << verdict_name(row.verdict) << ",";
    if (row.matched)
      os << row.matched->label << "," << to_fraction_string(row.matched->value) << ","
         << to_fraction_string(row.matched->abs_diff);
    else
      os << ",,";
    os << "\n";
  }
  return os.str();
}

std::string export_analytics(const GameParams& p) {
  std::ostringstream os;
  os << "bftgame-analytics v1\n" << export_params(p);
  for (int t = 1; t <= p.f; ++t) {
    os << "row t=" << t << " phi=";
    append_decimal(os, phi(p.n, p.f, t));
    os << " psi=";
    append_decimal(os, psi(p.n, p.f, t));
    os << " pi_check=";
    append_decimal(os, pi_check(p, t));
    os << " pi_send=";
    append_decimal(os, pi_send(p, t));
    if (t < p.f) {
      os << " alpha=";
      append_decimal(os, alpha(p, t));
      os << " beta=";
      append_decimal(os, beta(p, t));
    }
    os << "\n";
  }
  os << "row t=" << (p.f + 1) << " psi=";
  append_decimal(os, psi(p.n, p.f, p.f + 1));
  os << " pi_send=";
  append_decimal(os, pi_send(p, p.f + 1));
  os << "\n";
  if (auto kt = kappa_threshold(p)) {
    os << "kappa_threshold=";
    append_decimal(os, *kt);
    os << "\n";
  } else {
    os << "kappa_threshold=vacuous\n";
  }
  os << "reward_threshold=";
  append_decimal(os, reward_threshold(p));
  os << "\n";
  return os.str();
}

std::string export_analytics_csv(const GameParams& p) {
  std::ostringstream os;
  os << "t,phi,phi_decimal,psi,psi_decimal,pi_check,pi_check_decimal,pi_send,pi_send_decimal,"
        "alpha,alpha_decimal,beta,beta_decimal\n";
  for (int t = 1; t <= p.f; ++t) {
    Rational ph = phi(p.n, p.f, t), ps = psi(p.n, p.f, t);
    Rational pc = pi_check(p, t), pse = pi_send(p, t);
    os << t << "," << to_fraction_string(ph) << "," << to_double(ph) << ","
       << to_fraction_string(ps) << "," << to_double(ps) << "," << to_fraction_string(pc)
       << "," << to_double(pc) << "," << to_fraction_string(pse) << "," << to_double(pse);
    if (t < p.f) {
      Rational a = alpha(p, t), b = beta(p, t);
      os << "," << to_fraction_string(a) << "," << to_double(a) << ","
         << to_fraction_string(b) << "," << to_double(b);
    } else {
      os << ",,,,";
    }
    os << "\n";
  }
  Rational ps = psi(p.n, p.f, p.f + 1), pse = pi_send(p, p.f + 1);
  os << (p.f + 1) << ",,," << to_fraction_string(ps) << "," << to_double(ps) << ",,,"
     << to_fraction_string(pse) << "," << to_double(pse) << ",,,,\n";
  if (auto kt = kappa_threshold(p))
    os << "# kappa_threshold=" << to_fraction_string(*kt) << " (" << to_double(*kt) << ")\n";
  else
    os << "# kappa_threshold=vacuous\n";
  Rational rt = reward_threshold(p);
  os << "# reward_threshold=" << to_fraction_string(rt) << " (" << to_double(rt) << ")\n";
  return os.str();
}

std::string export_classification(const GameParams& p, const RegimeClassification& rc) {
  std::ostringstream os;
  os << "bftgame-classification v1\n" << export_params(p);
  for (const ConditionCheck& c : rc.conditions_checked)
    os << "condition \"" << c.condition << "\" holds=" << (c.holds ? 1 : 0) << "\n";
  for (size_t i = 0; i < rc.regimes.size(); ++i) {
    os << "regime=" << regime_name(rc.regimes[i])
       << " predicted_termination=" << (rc.predicted[i].termination ? 1 : 0)
       << " predicted_validity=" << (rc.predicted[i].validity ? 1 : 0) << "\n";
  }
  if (rc.kappa_margin) {
    os << "kappa_margin=";
    append_decimal(os, *rc.kappa_margin);
    os << "\n";
  }
  if (rc.reward_margin) {
    os << "reward_margin=";
    append_decimal(os, *rc.reward_margin);
    os << "\n";
  }
  return os.str();
}

}  // namespace bftgame
