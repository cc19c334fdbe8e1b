#pragma once

#include <initializer_list>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "hybridbec/errors.hpp"

namespace hybridbec {

/// Reads fields out of a JSON object while rejecting keys nobody asked for.
/// Error messages carry the dotted path of the offending field.
class JsonFields {
public:
    JsonFields(const nlohmann::json& obj, std::string path, std::initializer_list<std::string_view> allowed)
        : obj_(obj), path_(std::move(path)) {
        if (!obj_.is_object()) throw ConfigError(where("") + "expected an object");
        for (const auto& [key, _] : obj_.items()) {
            bool known = false;
            for (auto a : allowed) known = known || (a == key);
            if (!known) throw ConfigError(where(key) + "unknown key");
        }
    }

    bool has(const std::string& key) const { return obj_.contains(key) && !obj_.at(key).is_null(); }

    template <class T>
    void read(const std::string& key, T& out) const {
        if (!has(key)) return;
        try {
            out = obj_.at(key).get<T>();
        } catch (const nlohmann::json::exception& e) {
            throw ConfigError(where(key) + "wrong type (" + e.what() + ")");
        }
    }

    const nlohmann::json& at(const std::string& key) const { return obj_.at(key); }
    std::string child(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }
    std::string where(const std::string& key) const {
        const std::string p = key.empty() ? path_ : child(key);
        return (p.empty() ? std::string("config") : p) + ": ";
    }

private:
    const nlohmann::json& obj_;
    std::string path_;
};

}  // namespace hybridbec
