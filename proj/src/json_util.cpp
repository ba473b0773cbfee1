#include "json_util.hpp"

#include <algorithm>

#include "nlsql/error.hpp"

namespace nlsql::detail {

namespace {

std::string where(std::string_view text, std::size_t byte) {
    // nlohmann reports a 1-based byte count of the offending character.
    const std::size_t offset = std::min(byte > 0 ? byte - 1 : 0, text.size());
    std::size_t line = 1;
    std::size_t column = 1;
    for (std::size_t i = 0; i < offset; ++i) {
        if (text[i] == '\n') {
            ++line;
            column = 1;
        } else {
            ++column;
        }
    }
    return "line " + std::to_string(line) + ", column " + std::to_string(column);
}

} // namespace

Json parse_json(std::string_view text, std::string_view what) {
    try {
        return Json::parse(text.begin(), text.end());
    } catch (const Json::parse_error& e) {
        std::string message = e.what();
        // Drop the "[json.exception.parse_error.101] parse error at ...:" prefix.
        if (auto colon = message.rfind(": "); colon != std::string::npos)
            message = message.substr(colon + 2);
        throw ConfigError(std::string(what) + ": parse error at " + where(text, e.byte) + ": " +
                          message);
    }
}

void check_fields(const Json& object, std::string_view context,
                  std::initializer_list<std::string_view> allowed,
                  std::initializer_list<std::string_view> required) {
    if (!object.is_object())
        throw ConfigError(std::string(context) + ": expected an object");
    for (const auto& [key, value] : object.items()) {
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
            throw ConfigError(std::string(context) + ": unknown field '" + key + "'");
    }
    for (std::string_view key : required) {
        if (!object.contains(key))
            throw ConfigError(std::string(context) + ": missing field '" + std::string(key) + "'");
    }
}

const Json& require_array(const Json& parent, std::string_view key, std::string_view context) {
    const Json& value = parent.at(std::string(key));
    if (!value.is_array())
        throw ConfigError(std::string(context) + ": field '" + std::string(key) +
                          "' must be a list");
    return value;
}

std::string require_string(const Json& parent, std::string_view key, std::string_view context) {
    const Json& value = parent.at(std::string(key));
    if (!value.is_string())
        throw ConfigError(std::string(context) + ": field '" + std::string(key) +
                          "' must be a string");
    return value.get<std::string>();
}

double require_number(const Json& value, std::string_view context) {
    if (!value.is_number())
        throw ConfigError(std::string(context) + ": expected a number");
    return value.get<double>();
}

} // namespace nlsql::detail
