#pragma once

#include <nlohmann/json.hpp>
#include <string>

#include "mia/infra/graph.hpp"

namespace mia::infra {

/// Reads the `infrastructure` document: assets, edges, vulnerabilities and
/// optional annotations. Throws ValidationError naming the offending field.
GraphSpec graph_spec_from_json(const nlohmann::json& doc, const std::string& path = "infrastructure");
nlohmann::json to_json(const GraphSpec& spec);

nlohmann::json to_json(const StaticImpactReport& report);

}  // namespace mia::infra
