#include "nlsql/error.hpp"

#include <utility>

namespace nlsql {

LexError::LexError(std::string word, std::size_t position)
    : Error("unknown word '" + word + "' at position " + std::to_string(position)),
      word_(std::move(word)),
      position_(position) {}

ParseError::ParseError(std::size_t position, std::string expected, std::string found)
    : Error("syntax error at position " + std::to_string(position) + ": expected " + expected +
            ", found " + found),
      position_(position),
      expected_(std::move(expected)),
      found_(std::move(found)) {}

DisconnectedError::DisconnectedError(std::string from, std::string to)
    : ResolveError("no join path connects table '" + from + "' and table '" + to + "'"),
      from_(std::move(from)),
      to_(std::move(to)) {}

} // namespace nlsql
