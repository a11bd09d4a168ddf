#pragma once

#include <nlohmann/json.hpp>
#include <string>

#include "mia/error.hpp"

namespace mia::json_util {

using nlohmann::json;

[[noreturn]] inline void invalid(const std::string& field, const std::string& reason) {
  throw Error(Errc::ValidationError, field + ": " + reason);
}

inline const json& require(const json& obj, const char* key, const std::string& path) {
  if (!obj.is_object()) invalid(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) invalid(path + "." + key, "missing required field");
  return *it;
}

template <class T>
T as(const json& value, const std::string& path) {
  try {
    return value.get<T>();
  } catch (const json::exception& e) {
    invalid(path, std::string("wrong type (") + value.type_name() + ")");
  }
}

template <class T>
T get(const json& obj, const char* key, const std::string& path) {
  return as<T>(require(obj, key, path), path + "." + key);
}

template <class T>
T get_or(const json& obj, const char* key, const std::string& path, T fallback) {
  if (!obj.is_object()) invalid(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return fallback;
  return as<T>(*it, path + "." + key);
}

inline const json* find(const json& obj, const char* key) {
  if (!obj.is_object()) return nullptr;
  auto it = obj.find(key);
  return it == obj.end() || it->is_null() ? nullptr : &*it;
}

}  // namespace mia::json_util
