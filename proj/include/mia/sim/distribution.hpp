#pragma once

#include <string>
#include <variant>

#include "mia/sim/rng.hpp"

namespace mia::sim {

struct Fixed {
  double value = 0.0;
  bool operator==(const Fixed&) const = default;
};
struct Uniform {
  double min = 0.0;
  double max = 0.0;
  bool operator==(const Uniform&) const = default;
};
struct Exponential {
  double mean = 1.0;
  bool operator==(const Exponential&) const = default;
};
struct Triangular {
  double min = 0.0;
  double mode = 0.0;
  double max = 0.0;
  bool operator==(const Triangular&) const = default;
};

/// Parametric sampling family. Parameters are in the units of the sampled
/// quantity (seconds for every duration in a scenario).
using Distribution = std::variant<Fixed, Uniform, Exponential, Triangular>;

/// Throws Errc::InvalidDistribution when parameters violate the family's rules.
void validate(const Distribution& dist);

double sample(const Distribution& dist, RngStream& stream);

double mean(const Distribution& dist);
double variance(const Distribution& dist);

std::string kind_name(const Distribution& dist);

}  // namespace mia::sim
