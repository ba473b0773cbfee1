#include "nlsql/parser.hpp"

#include <algorithm>

#include "nlsql/error.hpp"

namespace nlsql {

namespace {

class Parser {
public:
    explicit Parser(std::span<const Token> tokens) : tokens_(tokens) {}

    QueryIR parse_query() {
        QueryIR ir;
        expect(TokenKind::VerbSelect, "VERB_SELECT");
        parse_select_list(ir);
        if (accept(TokenKind::Of)) ir.scope_table = expect(TokenKind::Table, "TABLE").target;
        if (peek_is(TokenKind::WhereIntro)) {
            ++pos_;
            ir.predicate = parse_where();
        }
        if (pos_ != tokens_.size()) {
            fail(ir.scope_table || ir.predicate ? "end of input"
                                                : "LOGICAL_AND, OF, WHERE_INTRO or end of input");
        }
        return ir;
    }

private:
    void parse_select_list(QueryIR& ir) {
        add_select(ir, expect(TokenKind::Column, "COLUMN"));
        while (peek_is(TokenKind::LogicalAnd)) {
            if (peek_is(TokenKind::Column, 1) && peek_is(TokenKind::Comparator, 2)) {
                ++pos_;
                fail("WHERE_INTRO before a condition");
            }
            ++pos_;
            add_select(ir, expect(TokenKind::Column, "COLUMN"));
        }
    }

    void add_select(QueryIR& ir, const Token& column) {
        auto& list = ir.select_columns;
        if (std::find(list.begin(), list.end(), column.target) != list.end())
            throw ParseError(column.position, "a column not already selected",
                             describe(column));
        list.push_back(column.target);
    }

    PredicatePtr parse_where() {
        PredicatePtr left = parse_condition();
        while (peek_is(TokenKind::LogicalAnd) || peek_is(TokenKind::LogicalOr)) {
            const Logical op = tokens_[pos_].kind == TokenKind::LogicalAnd ? Logical::And
                                                                           : Logical::Or;
            ++pos_;
            left = make_connective(op, std::move(left), parse_condition());
        }
        return left;
    }

    PredicatePtr parse_condition() {
        const Token& column = expect(TokenKind::Column, "COLUMN");
        const Token& comparator = expect(TokenKind::Comparator, "COMPARATOR");
        if (pos_ >= tokens_.size() || (tokens_[pos_].kind != TokenKind::Number &&
                                       tokens_[pos_].kind != TokenKind::StringLiteral))
            fail("NUMBER or STRING_LITERAL");
        const Token& value = tokens_[pos_++];
        Literal literal = value.kind == TokenKind::Number ? Literal::number(value.target)
                                                          : Literal::string(value.target);
        return make_comparison(Comparison{
            "", column.target, *compare_op_from_symbol(comparator.target), std::move(literal)});
    }

    bool peek_is(TokenKind kind, std::size_t ahead = 0) const {
        return pos_ + ahead < tokens_.size() && tokens_[pos_ + ahead].kind == kind;
    }

    bool accept(TokenKind kind) {
        if (!peek_is(kind)) return false;
        ++pos_;
        return true;
    }

    const Token& expect(TokenKind kind, const char* expected) {
        if (!peek_is(kind)) fail(expected);
        return tokens_[pos_++];
    }

    [[noreturn]] void fail(std::string expected) const {
        if (pos_ < tokens_.size())
            throw ParseError(tokens_[pos_].position, std::move(expected), describe(tokens_[pos_]));
        const std::size_t end = tokens_.empty() ? 0 : tokens_.back().position + 1;
        throw ParseError(end, std::move(expected), "end of input");
    }

    static std::string describe(const Token& token) {
        return std::string(to_string(token.kind)) + " '" + token.source + "'";
    }

    std::span<const Token> tokens_;
    std::size_t pos_ = 0;
};

} // namespace

QueryIR parse(std::span<const Token> tokens) {
    return Parser(tokens).parse_query();
}

} // namespace nlsql
