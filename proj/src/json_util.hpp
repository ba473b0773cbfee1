#pragma once

// Strict JSON helpers shared by the config loaders.

#include <initializer_list>
#include <string>
#include <string_view>

#include <json.hpp>

namespace nlsql::detail {

using Json = nlohmann::json;

/// Parses `text`; syntax errors become ConfigError with line and column.
Json parse_json(std::string_view text, std::string_view what);

/// Rejects fields outside `allowed` and reports missing `required` ones.
void check_fields(const Json& object, std::string_view context,
                  std::initializer_list<std::string_view> allowed,
                  std::initializer_list<std::string_view> required);

const Json& require_array(const Json& parent, std::string_view key, std::string_view context);
std::string require_string(const Json& parent, std::string_view key, std::string_view context);
double require_number(const Json& value, std::string_view context);

} // namespace nlsql::detail
