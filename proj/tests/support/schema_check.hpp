#pragma once

// Validator for the subset of JSON Schema the report schema uses: type,
// required, properties, items, enum, minItems/maxItems and local $ref.

#include <string>

#include <nlohmann/json.hpp>

namespace testsupport {

using nlohmann::json;

inline const json& resolve_ref(const json& schema, const json& root) {
  if (schema.contains("$ref")) {
    std::string ref = schema.at("$ref").get<std::string>();  // "#/definitions/name"
    const json* node = &root;
    std::size_t pos = 2;  // skip "#/"
    while (pos < ref.size()) {
      const std::size_t next = ref.find('/', pos);
      const std::string key = ref.substr(pos, next == std::string::npos ? next : next - pos);
      node = &node->at(key);
      pos = next == std::string::npos ? ref.size() : next + 1;
    }
    return *node;
  }
  return schema;
}

inline bool validate_json(const json& value, const json& schemaIn, const json& root,
                          std::string& error, const std::string& path = "$") {
  const json& schema = resolve_ref(schemaIn, root);

  if (schema.contains("type")) {
    const std::string t = schema.at("type").get<std::string>();
    const bool ok = (t == "object" && value.is_object()) || (t == "array" && value.is_array()) ||
                    (t == "string" && value.is_string()) ||
                    (t == "number" && value.is_number()) ||
                    (t == "integer" && value.is_number_integer()) ||
                    (t == "boolean" && value.is_boolean()) || (t == "null" && value.is_null());
    if (!ok) {
      error = path + ": expected " + t;
      return false;
    }
  }
  if (schema.contains("enum")) {
    bool found = false;
    for (const auto& e : schema.at("enum")) found |= e == value;
    if (!found) {
      error = path + ": value not in enum";
      return false;
    }
  }
  if (value.is_object()) {
    if (schema.contains("required"))
      for (const auto& req : schema.at("required"))
        if (!value.contains(req.get<std::string>())) {
          error = path + ": missing required field " + req.get<std::string>();
          return false;
        }
    if (schema.contains("properties"))
      for (auto it = schema.at("properties").begin(); it != schema.at("properties").end(); ++it)
        if (value.contains(it.key()))
          if (!validate_json(value.at(it.key()), it.value(), root, error, path + "." + it.key()))
            return false;
  }
  if (value.is_array()) {
    if (schema.contains("minItems") && value.size() < schema.at("minItems").get<std::size_t>()) {
      error = path + ": too few items";
      return false;
    }
    if (schema.contains("maxItems") && value.size() > schema.at("maxItems").get<std::size_t>()) {
      error = path + ": too many items";
      return false;
    }
    if (schema.contains("items")) {
      std::size_t idx = 0;
      for (const auto& item : value) {
        if (!validate_json(item, schema.at("items"), root, error,
                           path + "[" + std::to_string(idx) + "]"))
          return false;
        ++idx;
      }
    }
  }
  return true;
}

}  // namespace testsupport
