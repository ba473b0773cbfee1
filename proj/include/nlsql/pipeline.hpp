#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "nlsql/ir.hpp"
#include "nlsql/lexer.hpp"
#include "nlsql/query_builder.hpp"
#include "nlsql/schema.hpp"

namespace nlsql {

struct Translation {
    std::vector<Token> tokens;
    QueryIR ir;
    ResolvedQuery resolved;
    SqlQuery sql;
};

/// Schema, graph and lexicon built once; translates any number of queries.
class Translator {
public:
    explicit Translator(Schema schema);

    const Schema& schema() const { return schema_; }
    const SchemaGraph& graph() const { return graph_; }
    const Lexicon& lexicon() const { return lexicon_; }

    /// English text to IR only (lexing and parsing).
    QueryIR to_ir(std::string_view query) const;

    /// Full translation; throws LexError, ParseError or ResolveError.
    Translation translate(std::string_view query) const;

private:
    Schema schema_;
    SchemaGraph graph_;
    Lexicon lexicon_;
};

} // namespace nlsql
