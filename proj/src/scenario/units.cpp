#include "mia/scenario/units.hpp"

#include <array>
#include <cmath>
#include <utility>

#include "mia/json_util.hpp"

namespace mia::scenario {

using nlohmann::json;
using namespace json_util;

double duration_from_json(const json& value, const std::string& path) {
  if (value.is_number()) {
    const double v = value.get<double>();
    if (!std::isfinite(v)) invalid(path, "duration must be finite");
    return v;
  }
  if (!value.is_object()) invalid(path, "duration must be a number of seconds or a unit object");
  static constexpr std::array<std::pair<const char*, double>, 4> units{
      {{"seconds", 1.0}, {"minutes", 60.0}, {"hours", 3600.0}, {"days", 86400.0}}};
  if (value.size() != 1) invalid(path, "duration object needs exactly one unit");
  for (const auto& [name, scale] : units) {
    if (const json* v = find(value, name)) {
      const double n = as<double>(*v, path + "." + name);
      if (!std::isfinite(n)) invalid(path, "duration must be finite");
      return n * scale;
    }
  }
  invalid(path, "unknown duration unit '" + value.begin().key() + "'");
}

sim::Distribution distribution_from_json(const json& value, const std::string& path) {
  if (value.is_number() || (value.is_object() && !value.contains("kind"))) {
    return sim::Fixed{duration_from_json(value, path)};
  }
  const auto kind = get<std::string>(value, "kind", path);
  auto param = [&](const char* key) { return duration_from_json(require(value, key, path), path + "." + key); };
  sim::Distribution out;
  if (kind == "fixed") {
    out = sim::Fixed{param("value")};
  } else if (kind == "uniform") {
    out = sim::Uniform{param("min"), param("max")};
  } else if (kind == "exponential") {
    out = sim::Exponential{param("mean")};
  } else if (kind == "triangular") {
    out = sim::Triangular{param("min"), param("mode"), param("max")};
  } else {
    invalid(path + ".kind", "unknown distribution '" + kind + "'");
  }
  try {
    sim::validate(out);
  } catch (const Error& e) {
    invalid(path, e.what());
  }
  return out;
}

json to_json(const sim::Distribution& dist) {
  return std::visit(
      [](const auto& d) -> json {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, sim::Fixed>) {
          return {{"kind", "fixed"}, {"value", d.value}};
        } else if constexpr (std::is_same_v<T, sim::Uniform>) {
          return {{"kind", "uniform"}, {"min", d.min}, {"max", d.max}};
        } else if constexpr (std::is_same_v<T, sim::Exponential>) {
          return {{"kind", "exponential"}, {"mean", d.mean}};
        } else {
          return {{"kind", "triangular"}, {"min", d.min}, {"mode", d.mode}, {"max", d.max}};
        }
      },
      dist);
}

}  // namespace mia::scenario
