#ifndef OCVRP_JSON_UTIL_HPP
#define OCVRP_JSON_UTIL_HPP

#include <cmath>
#include <cstdio>
#include <string>

#include <nlohmann/json.hpp>

#include "ocvrp/errors.hpp"

namespace ocvrp {

namespace detail {

// Fixed six-decimal rendering so identical values always serialize to
// identical bytes; -0.0 collapses to 0.0 first.
inline std::string canon_float(double v) {
    if (!std::isfinite(v)) throw Error("non-finite number in JSON output");
    if (v == 0.0) v = 0.0;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

inline bool primitive_array(const nlohmann::json& a) {
    for (const auto& e : a)
        if (e.is_object() || e.is_array()) return false;
    return true;
}

inline void canon_write(const nlohmann::json& j, std::string& out, int depth) {
    const auto pad = [&](int d) { out.append(static_cast<std::size_t>(d) * 2, ' '); };
    switch (j.type()) {
        case nlohmann::json::value_t::null: out += "null"; break;
        case nlohmann::json::value_t::boolean: out += j.get<bool>() ? "true" : "false"; break;
        case nlohmann::json::value_t::string: out += nlohmann::json(j.get<std::string>()).dump(); break;
        case nlohmann::json::value_t::number_integer:
            out += std::to_string(j.get<std::int64_t>());
            break;
        case nlohmann::json::value_t::number_unsigned:
            out += std::to_string(j.get<std::uint64_t>());
            break;
        case nlohmann::json::value_t::number_float: out += canon_float(j.get<double>()); break;
        case nlohmann::json::value_t::array: {
            if (j.empty()) {
                out += "[]";
                break;
            }
            if (primitive_array(j)) {
                out += '[';
                bool first = true;
                for (const auto& e : j) {
                    if (!first) out += ", ";
                    first = false;
                    canon_write(e, out, depth);
                }
                out += ']';
                break;
            }
            out += "[\n";
            bool first = true;
            for (const auto& e : j) {
                if (!first) out += ",\n";
                first = false;
                pad(depth + 1);
                canon_write(e, out, depth + 1);
            }
            out += '\n';
            pad(depth);
            out += ']';
            break;
        }
        case nlohmann::json::value_t::object: {
            if (j.empty()) {
                out += "{}";
                break;
            }
            out += "{\n";
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {  // keys already sorted
                if (!first) out += ",\n";
                first = false;
                pad(depth + 1);
                out += nlohmann::json(it.key()).dump();
                out += ": ";
                canon_write(it.value(), out, depth + 1);
            }
            out += '\n';
            pad(depth);
            out += '}';
            break;
        }
        default: throw Error("unsupported JSON value type");
    }
}

}  // namespace detail

// Canonical text form: sorted keys, two-space indent, fixed 6-decimal
// floats, arrays of primitives on one line. save -> load -> save is
// byte-stable: re-serializing a parsed canonical file reproduces it exactly,
// because %.6f text survives the parse/print round trip.
inline std::string canonical_json(const nlohmann::json& j) {
    std::string out;
    detail::canon_write(j, out, 0);
    out += '\n';
    return out;
}

}  // namespace ocvrp

#endif
