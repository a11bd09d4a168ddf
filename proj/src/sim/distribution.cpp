#include "mia/sim/distribution.hpp"

#include <cmath>

#include "mia/error.hpp"

namespace mia::sim {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require(bool ok, const char* what) {
  if (!ok) throw Error(Errc::InvalidDistribution, what);
}

}  // namespace

void validate(const Distribution& dist) {
  std::visit(overloaded{
                 [](const Fixed& d) { require(std::isfinite(d.value), "fixed value must be finite"); },
                 [](const Uniform& d) {
                   require(std::isfinite(d.min) && std::isfinite(d.max), "uniform bounds must be finite");
                   require(d.min <= d.max, "uniform requires min <= max");
                 },
                 [](const Exponential& d) {
                   require(std::isfinite(d.mean) && d.mean > 0.0, "exponential requires mean > 0");
                 },
                 [](const Triangular& d) {
                   require(std::isfinite(d.min) && std::isfinite(d.max) && std::isfinite(d.mode),
                           "triangular parameters must be finite");
                   require(d.min <= d.mode && d.mode <= d.max, "triangular requires min <= mode <= max");
                 },
             },
             dist);
}

double sample(const Distribution& dist, RngStream& stream) {
  validate(dist);
  return std::visit(
      overloaded{
          [](const Fixed& d) { return d.value; },
          [&](const Uniform& d) {
            const double u = stream.uniform();
            return d.min + (d.max - d.min) * u;
          },
          [&](const Exponential& d) { return -d.mean * std::log1p(-stream.uniform()); },
          [&](const Triangular& d) {
            const double u = stream.uniform();
            const double width = d.max - d.min;
            if (width <= 0.0) return d.min;
            const double split = (d.mode - d.min) / width;
            if (u < split) return d.min + std::sqrt(u * width * (d.mode - d.min));
            return d.max - std::sqrt((1.0 - u) * width * (d.max - d.mode));
          },
      },
      dist);
}

double mean(const Distribution& dist) {
  return std::visit(overloaded{
                        [](const Fixed& d) { return d.value; },
                        [](const Uniform& d) { return 0.5 * (d.min + d.max); },
                        [](const Exponential& d) { return d.mean; },
                        [](const Triangular& d) { return (d.min + d.mode + d.max) / 3.0; },
                    },
                    dist);
}

double variance(const Distribution& dist) {
  return std::visit(overloaded{
                        [](const Fixed&) { return 0.0; },
                        [](const Uniform& d) { return (d.max - d.min) * (d.max - d.min) / 12.0; },
                        [](const Exponential& d) { return d.mean * d.mean; },
                        [](const Triangular& d) {
                          const double a = d.min, b = d.max, c = d.mode;
                          return (a * a + b * b + c * c - a * b - a * c - b * c) / 18.0;
                        },
                    },
                    dist);
}

std::string kind_name(const Distribution& dist) {
  return std::visit(overloaded{
                        [](const Fixed&) { return std::string("fixed"); },
                        [](const Uniform&) { return std::string("uniform"); },
                        [](const Exponential&) { return std::string("exponential"); },
                        [](const Triangular&) { return std::string("triangular"); },
                    },
                    dist);
}

}  // namespace mia::sim
