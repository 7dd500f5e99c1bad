#pragma once

#include "ivbounds/error.hpp"
#include "ivbounds/interval.hpp"
#include "ivbounds/rational.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace ivbounds::detail {

using nlohmann::json;

inline std::string child(const std::string& where, const std::string& key) { return where + "/" + key; }
inline std::string child(const std::string& where, std::size_t i) { return where + "/" + std::to_string(i); }

inline const json& require(const json& obj, const std::string& key, const std::string& where) {
    if (!obj.is_object()) throw ParseError(where, "expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) throw ParseError(child(where, key), "missing required field");
    return *it;
}

inline Rational to_rational(const json& v, const std::string& where, bool strict) {
    if (v.is_string()) {
        if (auto r = Rational::try_parse(v.get<std::string>())) return *r;
        throw ParseError(where, "not an exact decimal or fraction: '" + v.get<std::string>() + "'");
    }
    if (v.is_number_integer()) return Rational::parse(v.dump());
    if (v.is_number_float()) {
        if (strict) throw ParseError(where, "floating-point literal " + v.dump() + " is not exact; quote it as a string");
        return Rational::parse(v.dump());
    }
    throw ParseError(where, "expected a decimal string");
}

inline int to_int(const json& v, const std::string& where) {
    if (!v.is_number_integer()) throw ParseError(where, "expected an integer");
    return v.get<int>();
}

inline std::vector<int> to_int_vector(const json& v, const std::string& where) {
    if (!v.is_array()) throw ParseError(where, "expected an array of integers");
    std::vector<int> out;
    for (std::size_t i = 0; i < v.size(); ++i) out.push_back(to_int(v[i], child(where, i)));
    return out;
}

inline json to_json(const Rational& r) { return r.pretty(); }
inline json to_json(const Interval& iv) { return json::array({iv.lo().pretty(), iv.hi().pretty()}); }
inline json to_json(const std::optional<Interval>& iv) { return iv ? to_json(*iv) : json(nullptr); }

}  // namespace ivbounds::detail
