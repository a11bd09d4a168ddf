#pragma once

#include <gtest/gtest.h>

#include <functional>
#include <string>

#include "mia/error.hpp"

namespace mia::testing {

/// Runs `fn` and returns the code of the mia::Error it throws.
inline Errc code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no mia::Error thrown";
  return Errc::Io;
}

inline std::string source_path(const std::string& rel) { return std::string(MIA_SOURCE_DIR) + "/" + rel; }

}  // namespace mia::testing
