#pragma once

// Typed access into parsed documents with path-qualified ParseErrors.

#include <cstdint>
#include <string>
#include <string_view>

#include <json.hpp>

#include "qpkc/error.hpp"

namespace qpkc::detail {

using Json = nlohmann::ordered_json;

inline Json parse_document(std::string_view text) {
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw ParseError(std::string("malformed document: ") + e.what(), "byte " + std::to_string(e.byte));
    }
}

inline const Json& field(const Json& obj, const std::string& key, const std::string& path) {
    if (!obj.is_object()) {
        throw ParseError("expected an object", path.empty() ? "/" : path);
    }
    auto it = obj.find(key);
    if (it == obj.end()) {
        throw ParseError("missing field '" + key + "'", path + "/" + key);
    }
    return *it;
}

inline double as_double(const Json& v, const std::string& path) {
    if (!v.is_number()) {
        throw ParseError("expected a number", path);
    }
    return v.get<double>();
}

inline std::uint64_t as_count(const Json& v, const std::string& path) {
    if (!v.is_number_unsigned()) {
        throw ParseError("expected a non-negative integer", path);
    }
    return v.get<std::uint64_t>();
}

inline std::int64_t as_int(const Json& v, const std::string& path) {
    if (!v.is_number_integer()) {
        throw ParseError("expected an integer", path);
    }
    return v.get<std::int64_t>();
}

inline std::string as_string(const Json& v, const std::string& path) {
    if (!v.is_string()) {
        throw ParseError("expected a string", path);
    }
    return v.get<std::string>();
}

inline const Json& as_array(const Json& v, std::size_t expected_size, const std::string& path) {
    if (!v.is_array()) {
        throw ParseError("expected an array", path);
    }
    if (v.size() != expected_size) {
        throw ParseError("expected " + std::to_string(expected_size) + " entries, found " +
                             std::to_string(v.size()),
                         path);
    }
    return v;
}

inline void check_header(const Json& doc, std::string_view kind) {
    const std::int64_t version = as_int(field(doc, "version", ""), "/version");
    if (version != 1) {
        throw ParseError("unsupported version " + std::to_string(version), "/version");
    }
    const std::string k = as_string(field(doc, "kind", ""), "/kind");
    if (k != kind) {
        throw ParseError("expected kind '" + std::string(kind) + "', found '" + k + "'", "/kind");
    }
}

}  // namespace qpkc::detail
