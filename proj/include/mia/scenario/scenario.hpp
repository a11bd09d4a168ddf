#pragma once

#include <cstdint>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>

#include "mia/infra/graph.hpp"
#include "mia/mission/mission_spec.hpp"
#include "mia/threat/attacker.hpp"
#include "mia/threat/defender.hpp"

namespace mia::scenario {

inline constexpr int kSchemaVersion = 1;

struct SimSettings {
  std::size_t replications = 10;
  std::uint64_t base_seed = 1;
  double horizon = 86400.0;
  unsigned threads = 1;
};

struct Scenario {
  std::string name;
  SimSettings sim;
  infra::GraphSpec infrastructure;
  /// `mission.horizon` always mirrors `sim.horizon`.
  mission::MissionSpec mission;
  std::optional<threat::AttackerSpec> attacker;
  std::optional<threat::DefenderSpec> defender;
};

/// Parses and validates a scenario document. Throws ValidationError naming the
/// offending field, including cross-reference failures (task bound to an
/// unknown asset, unknown attacker target, attacker without a defender entry).
Scenario scenario_from_json(const nlohmann::json& doc);

/// Throws ParseError (with line and column) for malformed text, Io when the
/// file cannot be read, and ValidationError as above.
Scenario load_scenario(const std::string& path);
Scenario parse_scenario(const std::string& text, const std::string& origin = "<input>");

/// Every field written out with defaults filled in.
nlohmann::json to_json(const Scenario& scenario);
void save_scenario(const Scenario& scenario, const std::string& path);

/// Cross-reference checks on an already-built scenario. Throws ValidationError.
void validate(const Scenario& scenario);

/// Reads a standalone mission document (the `mission` section on its own).
mission::MissionSpec mission_from_json(const nlohmann::json& doc, const std::string& path = "mission");
nlohmann::json to_json(const mission::MissionSpec& mission);

/// Reads a whole JSON file. Throws Io or ParseError.
nlohmann::json read_json_file(const std::string& path);

}  // namespace mia::scenario
