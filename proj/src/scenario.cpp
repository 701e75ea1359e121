#include "bftgame/scenario.hpp"

#include <algorithm>
#include <fstream>
#include <random>
#include <sstream>

#include "bftgame/errors.hpp"
#include "bftgame/rational.hpp"

namespace bftgame {

namespace {

[[noreturn]] void fail(const std::string& msg) {
  throw GameError(Errc::ScenarioError, "scenario: " + msg);
}

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split_csv(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

int parse_int(const std::string& key, const std::string& v) {
  try {
    size_t pos = 0;
    int x = std::stoi(v, &pos);
    if (pos != v.size()) fail(key + ": trailing characters in '" + v + "'");
    return x;
  } catch (const GameError&) {
    throw;
  } catch (const std::exception&) {
    fail(key + ": not an integer: '" + v + "'");
  }
}

std::uint64_t parse_u64(const std::string& key, const std::string& v) {
  try {
    size_t pos = 0;
    std::uint64_t x = std::stoull(v, &pos);
    if (pos != v.size()) fail(key + ": trailing characters in '" + v + "'");
    return x;
  } catch (const GameError&) {
    throw;
  } catch (const std::exception&) {
    fail(key + ": not an unsigned integer: '" + v + "'");
  }
}

Rational parse_rat(const std::string& key, const std::string& v) {
  try {
    return parse_rational(v);
  } catch (const std::exception&) {
    fail(key + ": not a rational: '" + v + "'");
  }
}

}  // namespace

Scenario parse_scenario(const std::string& text) {
  Scenario sc;
  std::istringstream in(text);
  std::string line;
  bool saw_header = false;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    if (!saw_header) {
      if (line != "bftgame-scenario v1")
        fail("missing 'bftgame-scenario v1' header (line " + std::to_string(lineno) + ")");
      saw_header = true;
      continue;
    }
    size_t eq = line.find('=');
    if (eq == std::string::npos)
      fail("expected 'key = value' at line " + std::to_string(lineno));
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      fail("empty key or value at line " + std::to_string(lineno));

    if (key == "n") {
      sc.params.n = parse_int(key, value);
    } else if (key == "f") {
      sc.params.f = parse_int(key, value);
    } else if (key == "nu") {
      sc.params.nu = parse_int(key, value);
    } else if (key == "reward") {
      sc.params.reward = parse_rat(key, value);
    } else if (key == "cost_check") {
      sc.params.cost_check = parse_rat(key, value);
    } else if (key == "cost_send") {
      sc.params.cost_send = parse_rat(key, value);
    } else if (key == "kappa") {
      sc.params.kappa = parse_rat(key, value);
    } else if (key == "height") {
      sc.params.height_label = value;
    } else if (key == "profile") {
      if (value != "prop1" && value != "prop2" && value != "prop4")
        fail("profile must be prop1, prop2 or prop4 (got '" + value + "')");
      sc.profile = value;
    } else if (key == "assignment") {
      if (value == "worst-case") {
        sc.assignment_kind = Scenario::AssignmentKind::WorstCase;
      } else if (value == "uniform-random") {
        sc.assignment_kind = Scenario::AssignmentKind::UniformRandom;
      } else {
        sc.assignment_kind = Scenario::AssignmentKind::Explicit;
        sc.explicit_indexes.clear();
        for (const std::string& tok : split_csv(value))
          sc.explicit_indexes.push_back(parse_int("assignment", tok));
        if (sc.explicit_indexes.empty()) fail("assignment: empty index list");
        std::sort(sc.explicit_indexes.begin(), sc.explicit_indexes.end());
      }
    } else if (key == "seed") {
      sc.seed = parse_u64(key, value);
    } else if (key == "trials") {
      sc.trials = parse_u64(key, value);
      if (sc.trials <= 0) fail("trials must be positive");
    } else if (key == "random_assignments") {
      sc.random_assignments = parse_int(key, value);
      if (sc.random_assignments <= 0) fail("random_assignments must be positive");
    } else if (key == "mode") {
      if (value != "exact" && value != "mc")
        fail("mode must be exact or mc (got '" + value + "')");
      sc.mode = value;
    } else if (key == "analyses") {
      sc.analyses.clear();
      for (const std::string& tok : split_csv(value)) {
        if (tok != "simulate" && tok != "analytics" && tok != "verify" && tok != "classify")
          fail("unknown analysis '" + tok + "'");
        sc.analyses.push_back(tok);
      }
      if (sc.analyses.empty()) fail("analyses: empty list");
    } else if (key == "format") {
      if (value != "structured" && value != "csv")
        fail("format must be structured or csv (got '" + value + "')");
      sc.format = value;
    } else {
      fail("unknown key '" + key + "' at line " + std::to_string(lineno));
    }
  }
  if (!saw_header) fail("empty file (missing header)");
  if (auto e = validate_params_relaxed(sc.params))
    fail(std::string("invalid parameters: ") + errc_name(*e));
  if (sc.assignment_kind == Scenario::AssignmentKind::Explicit) {
    if (static_cast<int>(sc.explicit_indexes.size()) != sc.params.f)
      fail("assignment lists " + std::to_string(sc.explicit_indexes.size()) +
           " indexes but f=" + std::to_string(sc.params.f));
    for (size_t i = 0; i < sc.explicit_indexes.size(); ++i) {
      int x = sc.explicit_indexes[i];
      if (x < 1 || x > sc.params.n) fail("assignment index out of range: " + std::to_string(x));
      if (i && sc.explicit_indexes[i - 1] == x)
        fail("assignment index repeated: " + std::to_string(x));
    }
  }
  return sc;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

ByzantineAssignment resolve_assignment(const Scenario& sc, int draw) {
  switch (sc.assignment_kind) {
    case Scenario::AssignmentKind::Explicit:
      return ByzantineAssignment{sc.explicit_indexes};
    case Scenario::AssignmentKind::WorstCase:
      return ByzantineAssignment::worst_case(sc.params.f);
    case Scenario::AssignmentKind::UniformRandom: {
      std::mt19937_64 rng(sc.seed + 0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(draw + 1));
      std::vector<int> pool(sc.params.n);
      for (int i = 0; i < sc.params.n; ++i) pool[i] = i + 1;
      for (int i = 0; i < sc.params.f; ++i) {
        std::uniform_int_distribution<int> dist(i, sc.params.n - 1);
        std::swap(pool[i], pool[dist(rng)]);
      }
      std::vector<int> idx(pool.begin(), pool.begin() + sc.params.f);
      std::sort(idx.begin(), idx.end());
      return ByzantineAssignment{idx};
    }
  }
  fail("unreachable assignment kind");
}

}  // namespace bftgame
