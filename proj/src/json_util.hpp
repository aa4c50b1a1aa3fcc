#pragma once

#include "mbadmm/serialize.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

namespace mbadmm::detail {

/// Field path for error messages, e.g. `schemes[1].alpha`.
class JsonPath {
public:
    JsonPath key(const std::string& k) const { return JsonPath(path_.empty() ? k : path_ + "." + k); }
    JsonPath at(std::size_t i) const { return JsonPath(path_ + "[" + std::to_string(i) + "]"); }
    std::string str() const { return path_.empty() ? "<root>" : path_; }
    JsonPath() = default;

private:
    explicit JsonPath(std::string p) : path_(std::move(p)) {}
    std::string path_;
};

inline const nlohmann::json& require(const nlohmann::json& j, const char* key, const JsonPath& path) {
    if (!j.is_object()) throw FormatError(path.str() + ": expected an object");
    auto it = j.find(key);
    if (it == j.end()) throw FormatError(path.key(key).str() + ": missing required field");
    return *it;
}

inline double read_number(const nlohmann::json& j, const JsonPath& path) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) {
        const auto& s = j.get_ref<const std::string&>();
        if (s == "inf") return std::numeric_limits<double>::infinity();
        if (s == "-inf") return -std::numeric_limits<double>::infinity();
        if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    }
    throw FormatError(path.str() + ": expected a number, got " + j.dump());
}

inline long long read_integer(const nlohmann::json& j, const JsonPath& path) {
    if (j.is_number_integer()) return j.get<long long>();
    if (j.is_number_float()) {
        const double v = j.get<double>();
        if (std::floor(v) == v && std::abs(v) < 9e15) return static_cast<long long>(v);
    }
    throw FormatError(path.str() + ": expected an integer, got " + j.dump());
}

inline std::string read_string(const nlohmann::json& j, const JsonPath& path) {
    if (!j.is_string()) throw FormatError(path.str() + ": expected a string, got " + j.dump());
    return j.get<std::string>();
}

inline bool read_bool(const nlohmann::json& j, const JsonPath& path) {
    if (!j.is_boolean()) throw FormatError(path.str() + ": expected true or false, got " + j.dump());
    return j.get<bool>();
}

/// Parses text, turning syntax errors into FormatError with line and column.
inline nlohmann::json parse(const std::string& text) {
    try {
        return nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        std::size_t line = 1, col = 1;
        const std::size_t stop = std::min<std::size_t>(e.byte ? e.byte - 1 : 0, text.size());
        for (std::size_t i = 0; i < stop; ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        std::string what = e.what();
        const auto colon = what.rfind(": ");
        if (colon != std::string::npos) what = what.substr(colon + 2);
        throw FormatError("syntax error at line " + std::to_string(line) + ", column " +
                          std::to_string(col) + ": " + what);
    }
}

namespace json_emit {

inline bool scalar(const nlohmann::json& j) { return !j.is_array() && !j.is_object(); }

inline void emit(const nlohmann::json& j, std::string& out, int depth) {
    using nlohmann::json;
    const std::string pad(static_cast<std::size_t>(2 * (depth + 1)), ' ');
    const std::string close_pad(static_cast<std::size_t>(2 * depth), ' ');
    switch (j.type()) {
    case json::value_t::number_float: {
        const double v = j.get<double>();
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        out += buf;
        // keep it a float on re-read
        if (std::string(buf).find_first_of(".eEn") == std::string::npos) out += ".0";
        return;
    }
    case json::value_t::array: {
        if (j.empty()) {
            out += "[]";
            return;
        }
        bool flat = true;
        for (const auto& e : j) flat = flat && scalar(e);
        out += '[';
        bool first = true;
        for (const auto& e : j) {
            if (!first) out += flat ? ", " : ",";
            first = false;
            if (!flat) out += "\n" + pad;
            emit(e, out, depth + 1);
        }
        if (!flat) out += "\n" + close_pad;
        out += ']';
        return;
    }
    case json::value_t::object: {
        if (j.empty()) {
            out += "{}";
            return;
        }
        out += '{';
        bool first = true;
        for (auto it = j.begin(); it != j.end(); ++it) {
            if (!first) out += ',';
            first = false;
            out += "\n" + pad + json(it.key()).dump() + ": ";
            emit(it.value(), out, depth + 1);
        }
        out += "\n" + close_pad + '}';
        return;
    }
    default: out += j.dump(); return;
    }
}

}  // namespace json_emit

/// Pretty printer that writes every float with 17 significant digits.
inline std::string dump(const nlohmann::json& j) {
    std::string out;
    json_emit::emit(j, out, 0);
    out += '\n';
    return out;
}

}  // namespace mbadmm::detail
