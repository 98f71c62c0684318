// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace specflow::app {

using json = nlohmann::json;

/// Validator for the JSON Schema subset used by the shipped schemas: $ref (local
/// "#/..." pointers), type, enum, const, properties, required, additionalProperties,
/// items, minItems, maxItems, minimum, maximum, exclusiveMinimum, exclusiveMaximum,
/// minLength, oneOf, anyOf, allOf. Unknown keywords are ignored.
class SchemaValidator {
public:
    explicit SchemaValidator(json schema);

    /// Error messages ("<pointer>: <what>"); empty when the instance is valid.
    std::vector<std::string> validate(const json& instance) const;

private:
    void check(const json& schema, const json& inst, const std::string& where, std::vector<std::string>& errs,
               int depth) const;
    const json& resolve(const std::string& ref) const;

    json root_;
};

const json& scenario_schema();
const json& report_schema();

}  // namespace specflow::app
