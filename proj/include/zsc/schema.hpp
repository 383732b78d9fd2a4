#pragma once

// Validator for the subset of JSON Schema used by docs/schema/: type,
// properties, required, items, enum, const and oneOf. Enough to pin the
// shape of every document the CLI emits.

#include <string>

#include <json.hpp>

namespace zsc {

struct SchemaResult {
    bool ok = true;
    std::string path;     // first offending location
    std::string message;
};

namespace schema_detail {

inline bool type_matches(const nlohmann::json& v, const std::string& t) {
    if (t == "object") return v.is_object();
    if (t == "array") return v.is_array();
    if (t == "string") return v.is_string();
    if (t == "number") return v.is_number();
    if (t == "integer") return v.is_number_integer();
    if (t == "boolean") return v.is_boolean();
    if (t == "null") return v.is_null();
    return false;
}

inline SchemaResult fail(const std::string& path, const std::string& msg) {
    return {false, path, msg};
}

inline SchemaResult validate_at(const nlohmann::json& doc, const nlohmann::json& schema,
                                const std::string& path) {
    if (schema.contains("const")) {
        if (doc != schema["const"]) return fail(path, "does not match const");
    }
    if (schema.contains("enum")) {
        bool any = false;
        for (const auto& e : schema["enum"])
            if (doc == e) { any = true; break; }
        if (!any) return fail(path, "not in enum");
    }
    if (schema.contains("type")) {
        const auto& t = schema["type"];
        bool any = false;
        if (t.is_array()) {
            for (const auto& tt : t)
                if (type_matches(doc, tt.get<std::string>())) { any = true; break; }
        } else {
            any = type_matches(doc, t.get<std::string>());
        }
        if (!any) return fail(path, "wrong type");
    }
    if (schema.contains("oneOf")) {
        int matches = 0;
        for (const auto& sub : schema["oneOf"])
            if (validate_at(doc, sub, path).ok) ++matches;
        if (matches != 1) return fail(path, "oneOf matched " + std::to_string(matches) + " branches");
    }
    if (doc.is_object()) {
        if (schema.contains("required")) {
            for (const auto& k : schema["required"])
                if (!doc.contains(k.get<std::string>()))
                    return fail(path, "missing required key " + k.get<std::string>());
        }
        if (schema.contains("properties")) {
            for (const auto& [key, sub] : schema["properties"].items()) {
                if (!doc.contains(key)) continue;
                const auto r = validate_at(doc[key], sub, path + "/" + key);
                if (!r.ok) return r;
            }
        }
    }
    if (doc.is_array() && schema.contains("items")) {
        for (std::size_t i = 0; i < doc.size(); ++i) {
            const auto r =
                validate_at(doc[i], schema["items"], path + "/" + std::to_string(i));
            if (!r.ok) return r;
        }
    }
    return {};
}

}  // namespace schema_detail

inline SchemaResult validate_against_schema(const nlohmann::json& doc,
                                            const nlohmann::json& schema) {
    return schema_detail::validate_at(doc, schema, "");
}

}  // namespace zsc
