// json_emit.hpp — internal ordered JSON writer with 17-significant-digit
// decimal doubles (nlohmann's dumper prints shortest-round-trip forms, which
// breaks the fixed-format output contract).

#pragma once

#include <json.hpp>

#include <cstdio>
#include <sstream>
#include <string>

namespace dephnet {

namespace emit_detail {

inline void emit_value(std::ostringstream& os, const nlohmann::ordered_json& j, int depth) {
    using value_t = nlohmann::ordered_json::value_t;
    const std::string pad(static_cast<std::size_t>(depth) * 2, ' ');
    const std::string pad_in(static_cast<std::size_t>(depth + 1) * 2, ' ');
    switch (j.type()) {
        case value_t::object: {
            if (j.empty()) {
                os << "{}";
                return;
            }
            os << "{\n";
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) os << ",\n";
                first = false;
                os << pad_in << nlohmann::ordered_json(it.key()).dump() << ": ";
                emit_value(os, it.value(), depth + 1);
            }
            os << '\n' << pad << '}';
            return;
        }
        case value_t::array: {
            if (j.empty()) {
                os << "[]";
                return;
            }
            // Scalar-only arrays stay on one line.
            bool scalars = true;
            for (const auto& v : j) {
                if (v.is_object() || v.is_array()) {
                    scalars = false;
                    break;
                }
            }
            if (scalars) {
                os << '[';
                bool first = true;
                for (const auto& v : j) {
                    if (!first) os << ", ";
                    first = false;
                    emit_value(os, v, depth);
                }
                os << ']';
                return;
            }
            os << "[\n";
            bool first = true;
            for (const auto& v : j) {
                if (!first) os << ",\n";
                first = false;
                os << pad_in;
                emit_value(os, v, depth + 1);
            }
            os << '\n' << pad << ']';
            return;
        }
        case value_t::number_float: {
            char buf[40];
            std::snprintf(buf, sizeof buf, "%.17g", j.get<double>());
            os << buf;
            return;
        }
        default:
            os << j.dump();
            return;
    }
}

}  // namespace emit_detail

inline std::string emit_json(const nlohmann::ordered_json& j) {
    std::ostringstream os;
    emit_detail::emit_value(os, j, 0);
    os << '\n';
    return os.str();
}

}  // namespace dephnet
