#pragma once

#include <span>
#include <string>
#include <string_view>

namespace banditlab {

/// Shortest-safe rendering with 17 significant digits, independent of the
/// global locale. Non-finite values render as null (JSON has no inf/nan).
std::string fmt_double(double v);

/// JSON array of numbers.
std::string fmt_array(std::span<const double> values);

/// JSON string literal with escaping.
std::string json_quote(std::string_view s);

/// CSV field, quoted when it contains a comma, quote or newline.
std::string csv_field(std::string_view s);

/// Small builder for flat JSON objects: {"k":v,...}.
class JsonObject {
public:
    JsonObject& num(std::string_view key, double v);
    JsonObject& integer(std::string_view key, long long v);
    JsonObject& str(std::string_view key, std::string_view v);
    JsonObject& raw(std::string_view key, std::string_view json);
    JsonObject& array(std::string_view key, std::span<const double> values);
    std::string done() const { return body_ + "}"; }

private:
    void key(std::string_view k);
    std::string body_ = "{";
};

}  // namespace banditlab
