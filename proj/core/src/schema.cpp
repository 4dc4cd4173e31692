#include "chatprobe/schema.hpp"

#include <cmath>

namespace chatprobe {

namespace {

using nlohmann::json;

void check(const json& value, const json& schema, const std::string& path);

void check_type(const json& value, const std::string& type, const std::string& path) {
    bool ok = false;
    if (type == "object") ok = value.is_object();
    else if (type == "array") ok = value.is_array();
    else if (type == "string") ok = value.is_string();
    else if (type == "boolean") ok = value.is_boolean();
    else if (type == "number") ok = value.is_number();
    else if (type == "integer") {
        // Accept 3.0 as an integer: providers routinely emit whole floats.
        ok = value.is_number_integer() ||
             (value.is_number_float() &&
              std::floor(value.get<double>()) == value.get<double>());
    } else if (type == "null") ok = value.is_null();
    else throw SchemaViolation(path + ": unsupported schema type \"" + type + "\"");
    if (!ok) {
        throw SchemaViolation(path + ": expected " + type + ", got " +
                              std::string(value.type_name()));
    }
}

void check(const json& value, const json& schema, const std::string& path) {
    if (!schema.is_object()) {
        throw SchemaViolation(path + ": schema must be an object");
    }
    if (auto it = schema.find("type"); it != schema.end()) {
        check_type(value, it->get<std::string>(), path);
    }
    if (auto it = schema.find("enum"); it != schema.end()) {
        bool match = false;
        for (const auto& candidate : *it) {
            if (candidate == value) {
                match = true;
                break;
            }
        }
        if (!match) {
            throw SchemaViolation(path + ": value " + value.dump() + " not in enum " + it->dump());
        }
    }
    if (value.is_number()) {
        if (auto it = schema.find("minimum"); it != schema.end()) {
            if (value.get<double>() < it->get<double>()) {
                throw SchemaViolation(path + ": " + value.dump() + " below minimum " + it->dump());
            }
        }
        if (auto it = schema.find("maximum"); it != schema.end()) {
            if (value.get<double>() > it->get<double>()) {
                throw SchemaViolation(path + ": " + value.dump() + " above maximum " + it->dump());
            }
        }
    }
    if (value.is_object()) {
        const json* properties = nullptr;
        if (auto it = schema.find("properties"); it != schema.end()) properties = &*it;
        if (auto it = schema.find("required"); it != schema.end()) {
            for (const auto& name : *it) {
                if (!value.contains(name.get<std::string>())) {
                    throw SchemaViolation(path + ": missing required property \"" +
                                          name.get<std::string>() + "\"");
                }
            }
        }
        bool allow_extra = true;
        if (auto it = schema.find("additionalProperties"); it != schema.end() &&
            it->is_boolean()) {
            allow_extra = it->get<bool>();
        }
        for (const auto& [name, member] : value.items()) {
            const json* member_schema = nullptr;
            if (properties) {
                if (auto it = properties->find(name); it != properties->end()) {
                    member_schema = &*it;
                }
            }
            if (member_schema) {
                check(member, *member_schema, path + "/" + name);
            } else if (!allow_extra) {
                throw SchemaViolation(path + ": unexpected property \"" + name + "\"");
            }
        }
    }
    if (value.is_array()) {
        if (auto it = schema.find("minItems"); it != schema.end()) {
            if (value.size() < it->get<std::size_t>()) {
                throw SchemaViolation(path + ": fewer than " + it->dump() + " items");
            }
        }
        if (auto it = schema.find("maxItems"); it != schema.end()) {
            if (value.size() > it->get<std::size_t>()) {
                throw SchemaViolation(path + ": more than " + it->dump() + " items");
            }
        }
        if (auto it = schema.find("items"); it != schema.end()) {
            for (std::size_t i = 0; i < value.size(); ++i) {
                check(value[i], *it, path + "/" + std::to_string(i));
            }
        }
    }
}

} // namespace

void validate_against_schema(const nlohmann::json& value, const nlohmann::json& schema) {
    check(value, schema, "#");
}

} // namespace chatprobe
