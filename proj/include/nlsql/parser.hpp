#pragma once

#include <span>

#include "nlsql/ir.hpp"
#include "nlsql/lexer.hpp"

namespace nlsql {

/// Predictive parser with syntax-directed translation into QueryIR.
///
///     query       := VERB_SELECT select_list [OF TABLE] [where_part]
///     select_list := COLUMN (LOGICAL_AND COLUMN)*
///     where_part  := WHERE_INTRO condition ((LOGICAL_AND | LOGICAL_OR) condition)*
///     condition   := COLUMN COMPARATOR literal
///     literal     := NUMBER | STRING_LITERAL
///
/// Connectives are left-associative with equal precedence. In the select
/// list, "and COLUMN COMPARATOR" is rejected: conditions need a where word.
///
/// Throws ParseError; its position is the word index of the offending token,
/// or one past the last token at end of input.
QueryIR parse(std::span<const Token> tokens);

} // namespace nlsql
