#include "banditlab/format.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>

namespace banditlab {

std::string fmt_double(double v) {
    if (!std::isfinite(v)) return "null";
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

std::string fmt_array(std::span<const double> values) {
    std::string out = "[";
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out += ',';
        out += fmt_double(values[i]);
    }
    return out + "]";
}

std::string json_quote(std::string_view s) {
    std::string out = "\"";
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            case '\r': out += "\\r"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof buf, "\\u%04x", c);
                    out += buf;
                } else {
                    out += c;
                }
        }
    }
    return out + "\"";
}

std::string csv_field(std::string_view s) {
    if (s.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(s);
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

void JsonObject::key(std::string_view k) {
    if (body_.size() > 1) body_ += ',';
    body_ += json_quote(k);
    body_ += ':';
}

JsonObject& JsonObject::num(std::string_view k, double v) {
    key(k);
    body_ += fmt_double(v);
    return *this;
}

JsonObject& JsonObject::integer(std::string_view k, long long v) {
    key(k);
    body_ += std::to_string(v);
    return *this;
}

JsonObject& JsonObject::str(std::string_view k, std::string_view v) {
    key(k);
    body_ += json_quote(v);
    return *this;
}

JsonObject& JsonObject::raw(std::string_view k, std::string_view json) {
    key(k);
    body_ += json;
    return *this;
}

JsonObject& JsonObject::array(std::string_view k, std::span<const double> values) {
    key(k);
    body_ += fmt_array(values);
    return *this;
}

}  // namespace banditlab
