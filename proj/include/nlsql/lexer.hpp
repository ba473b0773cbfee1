#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "nlsql/schema.hpp"

namespace nlsql {

enum class TokenKind {
    VerbSelect,
    WhereIntro,
    Column,
    Table,
    Comparator,
    LogicalAnd,
    LogicalOr,
    Number,
    StringLiteral,
    Of,
};

/// Upper-case grammar name, e.g. "VERB_SELECT".
std::string_view to_string(TokenKind kind);

struct Token {
    TokenKind kind;
    std::string source;    // original word(s) as typed
    std::string target;    // mapped lexeme: "select", ">", schema spelling, literal text
    std::size_t position;  // word index of the first source word

    bool operator==(const Token&) const = default;
};

struct KeywordEntry {
    TokenKind kind;
    std::string target;
};

/// Word-to-token mapping derived from a schema plus the fixed keyword table.
struct Lexicon {
    std::map<std::string, std::string> columns;  // folded name -> schema spelling
    std::map<std::string, std::string> tables;   // folded name -> schema spelling
    std::map<std::vector<std::string>, KeywordEntry> keywords;  // lower-case phrase
    std::set<std::string> noise_words;
    std::size_t longest_phrase = 1;
};

/// Every word used by the keyword table or the noise list.
const std::set<std::string>& reserved_words();

/// Throws ConfigError when a schema identifier is a reserved word.
Lexicon generate_lexicon(const Schema& schema);

/// Classifies the words of `query`. Noise words are dropped, keyword phrases
/// match case-insensitively and longest-first, quoted runs become string
/// literals. Throws LexError carrying the word and its index for anything
/// unclassifiable, including an unterminated quote. A blank query yields no
/// tokens; the parser reports that.
std::vector<Token> tokenize(std::string_view query, const Lexicon& lexicon);

} // namespace nlsql
