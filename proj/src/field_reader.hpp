#pragma once

#include <set>
#include <string>
#include <type_traits>

#include <json.hpp>

#include "netresample/errors.hpp"

namespace netresample::detail {

using nlohmann::json;

// Typed field access that rejects unknown keys once all fields are read.
class FieldReader {
public:
    FieldReader(const json& j, std::string where) : j_(j), where_(std::move(where)) {
        if (!j_.is_object())
            throw ConfigError(where_ + ": expected a JSON object");
    }

    bool has(const std::string& key) {
        used_.insert(key);
        return j_.contains(key);
    }

    template <class T>
    T get(const std::string& key) {
        if (!has(key))
            throw ConfigError(where_ + ": missing field '" + key + "'");
        return as<T>(key);
    }

    template <class T>
    T get_or(const std::string& key, T fallback) {
        return has(key) ? as<T>(key) : fallback;
    }

    const json& raw(const std::string& key) {
        if (!has(key))
            throw ConfigError(where_ + ": missing field '" + key + "'");
        return j_.at(key);
    }

    const json* find(const std::string& key) {
        return has(key) ? &j_.at(key) : nullptr;
    }

    const std::string& where() const { return where_; }

    void finish() const {
        for (const auto& item : j_.items())
            if (!used_.contains(item.key()))
                throw ConfigError(where_ + ": unknown field '" + item.key() + "'");
    }

private:
    template <class T>
    T as(const std::string& key) {
        const json& v = j_.at(key);
        if constexpr (std::is_same_v<T, bool>) {
            if (!v.is_boolean())
                throw ConfigError(where_ + ": field '" + key + "' must be a boolean");
        } else if constexpr (std::is_integral_v<T>) {
            if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0))
                throw ConfigError(where_ + ": field '" + key + "' must be a nonnegative integer");
        } else if constexpr (std::is_floating_point_v<T>) {
            if (!v.is_number())
                throw ConfigError(where_ + ": field '" + key + "' must be a number");
        } else {
            if (!v.is_string())
                throw ConfigError(where_ + ": field '" + key + "' must be a string");
        }
        return v.get<T>();
    }

    const json& j_;
    std::string where_;
    std::set<std::string> used_;
};

} // namespace netresample::detail
