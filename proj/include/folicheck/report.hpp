#pragma once

// Canonical machine-readable output: a tiny JSON value type with a
// deterministic serializer (sorted keys, fixed float formatting) so report
// files are byte-stable across runs and platforms, plus CSV row helpers for
// sweep tables.

#include <cstdio>
#include <cstring>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "folicheck/errors.hpp"

namespace folicheck {

class JsonValue;
using JsonArray = std::vector<JsonValue>;
using JsonObject = std::map<std::string, JsonValue>;  // std::map keeps keys sorted

class JsonValue {
public:
    JsonValue() : v_(nullptr) {}
    JsonValue(std::nullptr_t) : v_(nullptr) {}
    JsonValue(bool b) : v_(b) {}
    JsonValue(int i) : v_(static_cast<long long>(i)) {}
    JsonValue(long i) : v_(static_cast<long long>(i)) {}
    JsonValue(long long i) : v_(i) {}
    JsonValue(std::size_t i) : v_(static_cast<long long>(i)) {}
    JsonValue(double d) : v_(d) {}
    JsonValue(const char* s) : v_(std::string(s)) {}
    JsonValue(std::string s) : v_(std::move(s)) {}
    JsonValue(JsonArray a) : v_(std::move(a)) {}
    JsonValue(JsonObject o) : v_(std::move(o)) {}

    bool is_null() const { return std::holds_alternative<std::nullptr_t>(v_); }
    bool is_object() const { return std::holds_alternative<JsonObject>(v_); }
    bool is_array() const { return std::holds_alternative<JsonArray>(v_); }

    JsonObject& obj() { return std::get<JsonObject>(v_); }
    const JsonObject& obj() const { return std::get<JsonObject>(v_); }
    JsonArray& arr() { return std::get<JsonArray>(v_); }
    const JsonArray& arr() const { return std::get<JsonArray>(v_); }

    /// Fixed 12-significant-digit formatting; negative zero collapses to zero
    /// so numerically equal reports serialize identically.
    static std::string format_double(double d) {
        if (!std::isfinite(d)) throw DomainError("non-finite value in report");
        if (d == 0.0) d = 0.0;  // drops the sign of -0
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.12g", d);
        return buf;
    }

    void dump(std::string& out) const {
        switch (v_.index()) {
            case 0: out += "null"; break;
            case 1: out += std::get<bool>(v_) ? "true" : "false"; break;
            case 2: out += std::to_string(std::get<long long>(v_)); break;
            case 3: out += format_double(std::get<double>(v_)); break;
            case 4: dump_string(std::get<std::string>(v_), out); break;
            case 5: {
                const auto& a = std::get<JsonArray>(v_);
                out += '[';
                for (std::size_t i = 0; i < a.size(); ++i) {
                    if (i) out += ',';
                    a[i].dump(out);
                }
                out += ']';
                break;
            }
            case 6: {
                const auto& o = std::get<JsonObject>(v_);
                out += '{';
                bool first = true;
                for (const auto& [k, val] : o) {
                    if (!first) out += ',';
                    first = false;
                    dump_string(k, out);
                    out += ':';
                    val.dump(out);
                }
                out += '}';
                break;
            }
        }
    }

    std::string dump() const {
        std::string out;
        dump(out);
        out += '\n';
        return out;
    }

private:
    static void dump_string(const std::string& s, std::string& out) {
        out += '"';
        for (unsigned char c : s) {
            switch (c) {
                case '"': out += "\\\""; break;
                case '\\': out += "\\\\"; break;
                case '\n': out += "\\n"; break;
                case '\t': out += "\\t"; break;
                case '\r': out += "\\r"; break;
                default:
                    if (c < 0x20) {
                        char buf[8];
                        std::snprintf(buf, sizeof buf, "\\u%04x", c);
                        out += buf;
                    } else {
                        out += static_cast<char>(c);
                    }
            }
        }
        out += '"';
    }

    std::variant<std::nullptr_t, bool, long long, double, std::string, JsonArray, JsonObject> v_;
};

/// One CSV line from already-formatted cells; quotes only where required.
inline std::string csv_row(const std::vector<std::string>& cells) {
    std::string out;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out += ',';
        const std::string& c = cells[i];
        if (c.find_first_of(",\"\n") != std::string::npos) {
            out += '"';
            for (char ch : c) {
                if (ch == '"') out += '"';
                out += ch;
            }
            out += '"';
        } else {
            out += c;
        }
    }
    out += '\n';
    return out;
}

}  // namespace folicheck
