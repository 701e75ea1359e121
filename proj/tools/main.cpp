// bftgame: committee-consensus game simulator and equilibrium checker.
//
// Subcommands:
//   simulate   run one height and print the execution trace + payoff ledger
//   analytics  print the closed-form payoff/threshold table
//   verify     enumerate one-shot deviations and check dominance
//   sweep      repeat verify over a parameter grid (--vary key=start:stop:step)
//   classify   report which parameter regime the configuration falls in
//
// Exit codes: 0 success (verify: all deviations dominated), 2 configuration
// error, 3 engine error, 4 a profitable deviation exists, 5 inconclusive
// (Monte-Carlo margins too wide to call).

#include <cstdlib>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "bftgame/analytics.hpp"
#include "bftgame/scenario.hpp"
#include "bftgame/simulation.hpp"
#include "bftgame/trace_io.hpp"
#include "bftgame/verifier.hpp"

namespace {

using namespace bftgame;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitEngine = 3;
constexpr int kExitProfitable = 4;
constexpr int kExitInconclusive = 5;

struct CommonOpts {
  std::string scenario_path;
  std::string out_path;
  std::string format;           // empty = take from scenario
  std::string mode;             // empty = take from scenario
  std::optional<std::uint64_t> seed;
  std::optional<long long> trials;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool needs_scenario = true) {
  auto* sopt = cmd->add_option("--scenario", o.scenario_path, "scenario file path");
  if (needs_scenario) sopt->required();
  cmd->add_option("--out", o.out_path, "write output to this file instead of stdout");
  cmd->add_option("--format", o.format, "structured|csv")
      ->check(CLI::IsMember({"structured", "csv"}));
  cmd->add_option("--mode", o.mode, "exact|mc")->check(CLI::IsMember({"exact", "mc"}));
  cmd->add_option("--seed", o.seed, "RNG seed (overrides scenario and BFTGAME_SEED)");
  cmd->add_option("--trials", o.trials, "Monte-Carlo trial count")
      ->check(CLI::PositiveNumber);
}

Scenario resolve_scenario(const CommonOpts& o) {
  Scenario sc = load_scenario(o.scenario_path);
  if (!o.format.empty()) sc.format = o.format;
  if (!o.mode.empty()) sc.mode = o.mode;
  if (const char* env = std::getenv("BFTGAME_SEED")) {
    try {
      sc.seed = std::stoull(env);
    } catch (const std::exception&) {
      throw GameError(Errc::ScenarioError, "BFTGAME_SEED is not an unsigned integer");
    }
  }
  if (o.seed) sc.seed = *o.seed;
  if (o.trials) sc.trials = *o.trials;
  return sc;
}

void emit(const CommonOpts& o, const std::string& text) {
  if (o.out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(o.out_path, std::ios::binary);
  if (!out) throw GameError(Errc::ScenarioError, "cannot write " + o.out_path);
  out << text;
}

VerifyOptions verify_options(const Scenario& sc) {
  VerifyOptions vo;
  vo.mode = sc.mode == "mc" ? VerifyMode::MonteCarlo : VerifyMode::Exact;
  vo.trials = sc.trials;
  vo.seed = sc.seed;
  return vo;
}

int verdict_exit(const VerificationReport& report) {
  if (report.any_profitable) return kExitProfitable;
  if (report.any_inconclusive) return kExitInconclusive;
  return kExitOk;
}

int cmd_simulate(const CommonOpts& o) {
  Scenario sc = resolve_scenario(o);
  std::ostringstream out;
  int draws =
      sc.assignment_kind == Scenario::AssignmentKind::UniformRandom ? sc.random_assignments : 1;
  for (int d = 0; d < draws; ++d) {
    ByzantineAssignment a = resolve_assignment(sc, d);
    StrategyProfile profile = profile_by_name(sc.params, sc.profile);
    RunResult r = run_height(sc.params, a, profile);
    ConsensusVerdict v = evaluate_consensus_properties(r.trace);
    if (sc.format == "csv")
      out << export_trace_csv(r.trace);
    else
      out << export_trace(r.trace, r.ledger, v);
    if (d + 1 < draws) out << "\n";
  }
  emit(o, out.str());
  return kExitOk;
}

int cmd_analytics(const CommonOpts& o) {
  Scenario sc = resolve_scenario(o);
  if (auto e = validate_params(sc.params))
    throw GameError(*e, "analytics requires f >= 1");
  emit(o, sc.format == "csv" ? export_analytics_csv(sc.params) : export_analytics(sc.params));
  return kExitOk;
}

int cmd_verify(const CommonOpts& o) {
  Scenario sc = resolve_scenario(o);
  StrategyProfile profile = profile_by_name(sc.params, sc.profile);
  VerificationReport report = verify_equilibrium(sc.params, profile, verify_options(sc));
  emit(o, sc.format == "csv"
              ? export_dominance_csv(report)
              : export_dominance(sc.params, sc.profile, sc.mode, report));
  return verdict_exit(report);
}

int cmd_classify(const CommonOpts& o) {
  Scenario sc = resolve_scenario(o);
  RegimeClassification rc = classify_regime(sc.params);
  emit(o, export_classification(sc.params, rc));
  return kExitOk;
}

// --vary key=start:stop:step over integer keys (n, f, nu). Rational knobs can
// be swept by editing the scenario; the grid is for structural parameters.
struct VaryAxis {
  std::string key;
  int start = 0, stop = 0, step = 1;
};

VaryAxis parse_vary(const std::string& spec) {
  VaryAxis ax;
  size_t eq = spec.find('=');
  if (eq == std::string::npos)
    throw GameError(Errc::ScenarioError, "--vary expects key=start:stop:step, got '" + spec + "'");
  ax.key = spec.substr(0, eq);
  if (ax.key != "n" && ax.key != "f" && ax.key != "nu")
    throw GameError(Errc::ScenarioError, "--vary key must be n, f or nu");
  std::string rest = spec.substr(eq + 1);
  int fields[3] = {0, 0, 1};
  size_t pos = 0;
  for (int i = 0; i < 3; ++i) {
    size_t colon = rest.find(':', pos);
    std::string tok =
        colon == std::string::npos ? rest.substr(pos) : rest.substr(pos, colon - pos);
    if (tok.empty()) throw GameError(Errc::ScenarioError, "--vary: empty field in '" + spec + "'");
    try {
      fields[i] = std::stoi(tok);
    } catch (const std::exception&) {
      throw GameError(Errc::ScenarioError, "--vary: '" + tok + "' is not an integer");
    }
    if (colon == std::string::npos) {
      if (i < 1) throw GameError(Errc::ScenarioError, "--vary needs at least start:stop");
      break;
    }
    pos = colon + 1;
  }
  ax.start = fields[0];
  ax.stop = fields[1];
  ax.step = fields[2];
  if (ax.step <= 0) throw GameError(Errc::ScenarioError, "--vary: step must be positive");
  if (ax.stop < ax.start) throw GameError(Errc::ScenarioError, "--vary: stop < start");
  return ax;
}

void apply_axis(GameParams& p, const std::string& key, int value) {
  if (key == "n")
    p.n = value;
  else if (key == "f")
    p.f = value;
  else
    p.nu = value;
}

int cmd_sweep(const CommonOpts& o, const std::vector<std::string>& vary_specs) {
  Scenario sc = resolve_scenario(o);
  std::vector<VaryAxis> axes;
  for (const std::string& spec : vary_specs) axes.push_back(parse_vary(spec));
  if (axes.empty()) throw GameError(Errc::ScenarioError, "sweep requires at least one --vary");

  // Materialize the full grid, then verify cells in parallel. Output order
  // is the grid order regardless of the completion schedule.
  std::vector<GameParams> grid;
  std::vector<std::vector<int>> coords;
  std::vector<int> cursor(axes.size());
  for (size_t i = 0; i < axes.size(); ++i) cursor[i] = axes[i].start;
  while (true) {
    GameParams p = sc.params;
    for (size_t i = 0; i < axes.size(); ++i) apply_axis(p, axes[i].key, cursor[i]);
    grid.push_back(p);
    coords.push_back(cursor);
    size_t k = axes.size();
    while (k > 0) {
      cursor[k - 1] += axes[k - 1].step;
      if (cursor[k - 1] <= axes[k - 1].stop) break;
      cursor[k - 1] = axes[k - 1].start;
      --k;
    }
    if (k == 0) break;
  }

  int jobs = 1;
  if (const char* env = std::getenv("BFTGAME_JOBS")) {
    try {
      jobs = std::max(1, std::stoi(env));
    } catch (const std::exception&) {
      throw GameError(Errc::ScenarioError, "BFTGAME_JOBS is not an integer");
    }
  }

  struct Cell {
    bool valid = false;
    std::string skip_reason;
    VerificationReport report;
  };
  auto run_cell = [&](const GameParams& p) {
    Cell cell;
    if (auto e = validate_params(p)) {
      cell.skip_reason = errc_name(*e);
      return cell;
    }
    try {
      StrategyProfile profile = profile_by_name(p, sc.profile);
      cell.report = verify_equilibrium(p, profile, verify_options(sc));
      cell.valid = true;
    } catch (const GameError& e) {
      cell.skip_reason = e.what();
    }
    return cell;
  };

  std::vector<Cell> cells(grid.size());
  for (size_t base = 0; base < grid.size(); base += static_cast<size_t>(jobs)) {
    size_t end = std::min(grid.size(), base + static_cast<size_t>(jobs));
    std::vector<std::future<Cell>> batch;
    for (size_t i = base; i < end; ++i)
      batch.push_back(std::async(std::launch::async, run_cell, grid[i]));
    for (size_t i = base; i < end; ++i) cells[i] = batch[i - base].get();
  }

  std::ostringstream out;
  bool any_profitable = false, any_inconclusive = false;
  out << "bftgame-sweep v1\n";
  for (size_t i = 0; i < grid.size(); ++i) {
    out << "cell";
    for (size_t a = 0; a < axes.size(); ++a) out << " " << axes[a].key << "=" << coords[i][a];
    if (!cells[i].valid) {
      out << " status=skipped reason=\"" << cells[i].skip_reason << "\"\n";
      continue;
    }
    const VerificationReport& rep = cells[i].report;
    out << " status=" << (rep.any_profitable
                              ? "profitable"
                              : rep.any_inconclusive ? "inconclusive" : "dominated")
        << " deviations=" << rep.deviations.size() << "\n";
    any_profitable |= rep.any_profitable;
    any_inconclusive |= rep.any_inconclusive;
  }
  out << "summary any_profitable=" << (any_profitable ? 1 : 0)
      << " any_inconclusive=" << (any_inconclusive ? 1 : 0) << "\n";
  emit(o, out.str());
  if (any_profitable) return kExitProfitable;
  if (any_inconclusive) return kExitInconclusive;
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"committee-consensus game simulator and equilibrium checker"};
  app.require_subcommand(1);

  CommonOpts sim_o, ana_o, ver_o, swp_o, cls_o;
  std::vector<std::string> vary_specs;

  add_common(app.add_subcommand("simulate", "run one height and print the trace"), sim_o);
  add_common(app.add_subcommand("analytics", "print the closed-form payoff table"), ana_o);
  add_common(app.add_subcommand("verify", "check one-shot deviation dominance"), ver_o);
  auto* sweep = app.add_subcommand("sweep", "verify across a parameter grid");
  add_common(sweep, swp_o);
  sweep->add_option("--vary", vary_specs, "axis spec key=start:stop:step (repeatable)")
      ->required();
  add_common(app.add_subcommand("classify", "report the parameter regime"), cls_o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }

  try {
    if (app.got_subcommand("simulate")) return cmd_simulate(sim_o);
    if (app.got_subcommand("analytics")) return cmd_analytics(ana_o);
    if (app.got_subcommand("verify")) return cmd_verify(ver_o);
    if (app.got_subcommand("sweep")) return cmd_sweep(swp_o, vary_specs);
    if (app.got_subcommand("classify")) return cmd_classify(cls_o);
  } catch (const GameError& e) {
    std::cerr << "error: " << e.what() << "\n";
    switch (e.code()) {
      case Errc::ScenarioError:
      case Errc::RangeViolated:
      case Errc::OrderingViolated:
      case Errc::EnumerationTooLarge:
        return kExitConfig;
      default:
        return kExitEngine;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitEngine;
  }
  return kExitConfig;
}
