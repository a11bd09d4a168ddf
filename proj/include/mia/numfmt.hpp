#pragma once

#include <charconv>
#include <cmath>
#include <string>

namespace mia {

/// Shortest text that parses back to the same double.
inline std::string format_number(double v) {
  if (v == 0.0) return "0";
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace mia
