#pragma once

#include <nlohmann/json.hpp>
#include <set>

#include "mia/discovery/discovery.hpp"

namespace mia::discovery {

nlohmann::json to_json(const DiscoveryParams& params);

/// Output document: direct[], indirect[], retry_chains[], parameters{} and the
/// exported graph under "infrastructure".
nlohmann::json to_json(const DiscoveryResult& result, const DiscoveryParams& params);

/// Reads the `direct`, `indirect` and `retry_chains` sections of a discovery
/// output or a ground-truth document as evaluation edges. Absent sections are
/// empty. Throws ValidationError.
std::set<Edge> edges_from_json(const nlohmann::json& doc);

}  // namespace mia::discovery
