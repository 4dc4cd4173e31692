// Minimal JSON Schema checker covering the subset the structured-output
// contracts use: object/array/string/number/integer/boolean types, required
// properties, additionalProperties, enum, numeric minimum/maximum, items.

#pragma once

#include <stdexcept>
#include <string>

#include <json.hpp>

namespace chatprobe {

class SchemaViolation : public std::runtime_error {
public:
    explicit SchemaViolation(const std::string& message) : std::runtime_error(message) {}
};

// Throws SchemaViolation with a JSON-pointer-ish location on the first
// mismatch between value and schema.
void validate_against_schema(const nlohmann::json& value, const nlohmann::json& schema);

} // namespace chatprobe
