#pragma once

#include <nlohmann/json.hpp>
#include <string>

#include "mia/sim/distribution.hpp"

namespace mia::scenario {

/// A duration is a number of seconds or an object with exactly one of
/// `seconds`, `minutes`, `hours`, `days`. Throws ValidationError.
double duration_from_json(const nlohmann::json& value, const std::string& path);

/// `{"kind": "fixed"|"uniform"|"exponential"|"triangular", ...}` with duration
/// parameters; a bare duration is shorthand for a fixed value. Throws
/// ValidationError, including for parameters the family rejects.
sim::Distribution distribution_from_json(const nlohmann::json& value, const std::string& path);

/// Canonical form, parameters in seconds.
nlohmann::json to_json(const sim::Distribution& dist);

}  // namespace mia::scenario
