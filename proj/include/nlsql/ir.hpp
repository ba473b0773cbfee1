#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace nlsql {

enum class CompareOp { Greater, Less, Equal, GreaterEqual, LessEqual, NotEqual };

/// SQL spelling: ">", "<", "=", ">=", "<=", "<>".
std::string_view symbol(CompareOp op);
std::optional<CompareOp> compare_op_from_symbol(std::string_view symbol);

/// True for the ordering comparators, which need a numeric column.
bool is_ordering(CompareOp op);

class Literal {
public:
    enum class Kind { Number, String };

    /// `numeral` must be a decimal numeral; it is stored canonically
    /// (no sign for zero, no leading zeros, no trailing fractional zeros).
    static Literal number(std::string_view numeral);
    static Literal string(std::string text);

    Kind kind() const { return kind_; }
    bool is_number() const { return kind_ == Kind::Number; }
    /// Canonical numeral, or the unquoted string body.
    const std::string& text() const { return text_; }
    double numeric_value() const;

    bool operator==(const Literal&) const = default;

private:
    Literal(Kind kind, std::string text) : kind_(kind), text_(std::move(text)) {}

    Kind kind_;
    std::string text_;
};

enum class Logical { And, Or };

struct Predicate;
using PredicatePtr = std::shared_ptr<const Predicate>;

struct Comparison {
    std::string table;  // owning table; empty until resolved
    std::string column;
    CompareOp op;
    Literal literal;

    bool operator==(const Comparison&) const = default;
};

struct Connective {
    Logical op;
    PredicatePtr left;
    PredicatePtr right;
};

/// Immutable predicate tree; subtrees are shared, never mutated.
struct Predicate {
    std::variant<Comparison, Connective> node;

    const Comparison* comparison() const { return std::get_if<Comparison>(&node); }
    const Connective* connective() const { return std::get_if<Connective>(&node); }
};

PredicatePtr make_comparison(Comparison comparison);
PredicatePtr make_connective(Logical op, PredicatePtr left, PredicatePtr right);

/// Structural equality.
bool operator==(const Predicate& a, const Predicate& b);

/// True when any connective in the tree is OR.
bool contains_or(const Predicate& predicate);

/// Comparisons in left-to-right order.
std::vector<const Comparison*> comparisons(const Predicate& predicate);

/// Intermediate form produced by syntax-directed translation.
struct QueryIR {
    std::vector<std::string> select_columns;
    std::optional<std::string> scope_table;
    PredicatePtr predicate;  // null when there is no where part
};

bool operator==(const QueryIR& a, const QueryIR& b);

/// Canonical text, e.g. "VP[select(customer_name), where(>(balance, 3000))]".
/// A scope table prints as an "of(table)" item between select and where.
std::string ir_to_text(const QueryIR& ir);

/// "3000", "'O''Hara'": the literal as it appears in IR and SQL text.
std::string render_literal(const Literal& literal);

} // namespace nlsql
