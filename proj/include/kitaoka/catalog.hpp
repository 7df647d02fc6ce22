#pragma once

#include "kitaoka/field.hpp"

#include <json.hpp>

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace kitaoka {

/// Parses one catalog entry. Throws MalformedSpec on missing or mistyped keys.
FieldSpec field_spec_from_json(const nlohmann::json& j);
nlohmann::ordered_json field_spec_to_json(const FieldSpec& spec);

/// Named collection of field specs; fields are validated and loaded lazily.
class Catalog {
public:
    /// The compiled-in fields.
    static Catalog builtin();

    /// Adds or replaces entries from a JSON array of field objects (or an
    /// object with a "fields" array).
    void merge(const nlohmann::json& doc);
    void merge_file(const std::filesystem::path& path);

    bool contains(const std::string& id) const { return specs_.count(id) != 0; }
    std::vector<std::string> ids() const;
    const FieldSpec& spec(const std::string& id) const;
    /// Loaded field; throws UnknownField or the load_field validation errors.
    FieldPtr field(const std::string& id) const;

private:
    std::map<std::string, FieldSpec> specs_;
    std::vector<std::string> order_;
    mutable std::map<std::string, FieldPtr> loaded_;
};

/// Built-in catalog extended by an explicit path, or else by $KITAOKA_CATALOG.
Catalog load_catalog(const std::string& path = "");

/// Shorthand for tests and tools: a built-in field by id.
FieldPtr builtin_field(const std::string& id);

} // namespace kitaoka
