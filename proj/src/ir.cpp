#include "nlsql/ir.hpp"

#include <cassert>
#include <charconv>

namespace nlsql {

std::string_view symbol(CompareOp op) {
    switch (op) {
    case CompareOp::Greater: return ">";
    case CompareOp::Less: return "<";
    case CompareOp::Equal: return "=";
    case CompareOp::GreaterEqual: return ">=";
    case CompareOp::LessEqual: return "<=";
    case CompareOp::NotEqual: return "<>";
    }
    return "?";
}

std::optional<CompareOp> compare_op_from_symbol(std::string_view text) {
    for (CompareOp op : {CompareOp::Greater, CompareOp::Less, CompareOp::Equal,
                         CompareOp::GreaterEqual, CompareOp::LessEqual, CompareOp::NotEqual})
        if (symbol(op) == text) return op;
    return std::nullopt;
}

bool is_ordering(CompareOp op) {
    return op != CompareOp::Equal && op != CompareOp::NotEqual;
}

Literal Literal::number(std::string_view numeral) {
    bool negative = false;
    if (!numeral.empty() && (numeral.front() == '+' || numeral.front() == '-')) {
        negative = numeral.front() == '-';
        numeral.remove_prefix(1);
    }
    std::string_view whole = numeral;
    std::string_view fraction;
    if (auto dot = numeral.find('.'); dot != std::string_view::npos) {
        whole = numeral.substr(0, dot);
        fraction = numeral.substr(dot + 1);
    }
    while (whole.size() > 1 && whole.front() == '0') whole.remove_prefix(1);
    while (!fraction.empty() && fraction.back() == '0') fraction.remove_suffix(1);
    if (whole.empty()) whole = "0";

    std::string text(whole);
    if (!fraction.empty()) text += "." + std::string(fraction);
    if (negative && text != "0") text.insert(text.begin(), '-');
    return Literal(Kind::Number, std::move(text));
}

Literal Literal::string(std::string text) {
    return Literal(Kind::String, std::move(text));
}

double Literal::numeric_value() const {
    assert(is_number());
    double value = 0.0;
    std::from_chars(text_.data(), text_.data() + text_.size(), value);
    return value;
}

PredicatePtr make_comparison(Comparison comparison) {
    return std::make_shared<const Predicate>(Predicate{std::move(comparison)});
}

PredicatePtr make_connective(Logical op, PredicatePtr left, PredicatePtr right) {
    return std::make_shared<const Predicate>(
        Predicate{Connective{op, std::move(left), std::move(right)}});
}

bool operator==(const Predicate& a, const Predicate& b) {
    if (a.node.index() != b.node.index()) return false;
    if (auto* ca = a.comparison()) return *ca == *b.comparison();
    const Connective& x = *a.connective();
    const Connective& y = *b.connective();
    return x.op == y.op && *x.left == *y.left && *x.right == *y.right;
}

bool contains_or(const Predicate& predicate) {
    const Connective* c = predicate.connective();
    if (!c) return false;
    return c->op == Logical::Or || contains_or(*c->left) || contains_or(*c->right);
}

namespace {

void collect(const Predicate& predicate, std::vector<const Comparison*>& out) {
    if (auto* c = predicate.comparison()) {
        out.push_back(c);
        return;
    }
    collect(*predicate.connective()->left, out);
    collect(*predicate.connective()->right, out);
}

void print(const Predicate& predicate, std::string& out) {
    if (auto* c = predicate.comparison()) {
        out += symbol(c->op);
        out += "(" + c->column + ", " + render_literal(c->literal) + ")";
        return;
    }
    const Connective& c = *predicate.connective();
    out += c.op == Logical::And ? "and(" : "or(";
    print(*c.left, out);
    out += ", ";
    print(*c.right, out);
    out += ")";
}

} // namespace

std::vector<const Comparison*> comparisons(const Predicate& predicate) {
    std::vector<const Comparison*> out;
    collect(predicate, out);
    return out;
}

bool operator==(const QueryIR& a, const QueryIR& b) {
    if (a.select_columns != b.select_columns || a.scope_table != b.scope_table) return false;
    if (!a.predicate || !b.predicate) return !a.predicate && !b.predicate;
    return *a.predicate == *b.predicate;
}

std::string render_literal(const Literal& literal) {
    if (literal.is_number()) return literal.text();
    std::string out = "'";
    for (char c : literal.text()) {
        if (c == '\'') out += '\'';
        out += c;
    }
    return out + "'";
}

std::string ir_to_text(const QueryIR& ir) {
    std::string out = "VP[select(";
    for (std::size_t i = 0; i < ir.select_columns.size(); ++i) {
        if (i > 0) out += ", ";
        out += ir.select_columns[i];
    }
    out += ")";
    if (ir.scope_table) out += ", of(" + *ir.scope_table + ")";
    if (ir.predicate) {
        out += ", where(";
        print(*ir.predicate, out);
        out += ")";
    }
    return out + "]";
}

} // namespace nlsql
