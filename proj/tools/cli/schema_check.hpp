#pragma once

#include <stdexcept>
#include <string>

#include <json.hpp>

namespace walklab::cli {

// Thrown for any config that does not match the schema. `pointer` is the
// JSON pointer of the offending value (or key).
struct SchemaError : std::runtime_error {
  SchemaError(std::string pointer, const std::string& what)
      : std::runtime_error(what), pointer(std::move(pointer)) {}
  std::string pointer;
};

// Validates `doc` against the subset of JSON Schema used by the shipped
// config schema: type, enum, properties, required, additionalProperties,
// minimum/maximum, exclusiveMinimum, minLength, minItems, items, pattern
// and local $ref.
void check_schema(const nlohmann::json& schema, const nlohmann::json& doc);

const nlohmann::json& config_schema();

}  // namespace walklab::cli
