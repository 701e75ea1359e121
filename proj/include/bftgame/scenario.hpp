#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "bftgame/game.hpp"

namespace bftgame {

// One batch configuration: game parameters plus what to run on them.
// Scenario files are line-oriented "key = value" text with a versioned
// header, readable and diffable without external tooling.
struct Scenario {
  GameParams params;
  std::string profile = "prop4";

  enum class AssignmentKind { Explicit, WorstCase, UniformRandom };
  AssignmentKind assignment_kind = AssignmentKind::WorstCase;
  std::vector<int> explicit_indexes;

  std::uint64_t seed = 1;
  long long trials = 100000;
  int random_assignments = 1;  // runs per simulate when assignment is random

  std::string mode = "exact";           // exact | mc
  std::vector<std::string> analyses;    // subset of simulate/analytics/verify/classify
  std::string format = "structured";    // structured | csv
};

Scenario parse_scenario(const std::string& text);
Scenario load_scenario(const std::filesystem::path& path);

// Resolves the scenario's assignment. Random assignments are drawn with the
// scenario seed (offset by `draw`), so outputs reproduce byte-identically.
ByzantineAssignment resolve_assignment(const Scenario& sc, int draw = 0);

}  // namespace bftgame
