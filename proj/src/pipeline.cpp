#include "nlsql/pipeline.hpp"

#include "nlsql/parser.hpp"

namespace nlsql {

Translator::Translator(Schema schema)
    : schema_(std::move(schema)), graph_(build_graph(schema_)), lexicon_(generate_lexicon(schema_)) {}

QueryIR Translator::to_ir(std::string_view query) const {
    return parse(tokenize(query, lexicon_));
}

Translation Translator::translate(std::string_view query) const {
    Translation t;
    t.tokens = tokenize(query, lexicon_);
    t.ir = parse(t.tokens);
    t.resolved = resolve(t.ir, schema_, graph_);
    t.sql = generate_sql(t.resolved);
    return t;
}

} // namespace nlsql
