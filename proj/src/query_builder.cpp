#include "nlsql/query_builder.hpp"

#include <algorithm>

#include "nlsql/error.hpp"

namespace nlsql {

namespace {

void render(const Predicate& predicate, bool qualify, std::string& out) {
    if (const Comparison* c = predicate.comparison()) {
        if (qualify) out += c->table + ".";
        out += c->column + " ";
        out += symbol(c->op);
        out += " " + render_literal(c->literal);
        return;
    }
    const Connective& c = *predicate.connective();
    // Equal precedence, left-associative: only a left child with a different
    // operator, or any connective on the right, needs parentheses in SQL.
    auto child = [&](const Predicate& p, bool is_left) {
        const Connective* inner = p.connective();
        const bool wrap = inner && (!is_left || inner->op != c.op);
        if (wrap) out += "(";
        render(p, qualify, out);
        if (wrap) out += ")";
    };
    child(*c.left, true);
    out += c.op == Logical::And ? " AND " : " OR ";
    child(*c.right, false);
}

std::string join_names(const std::vector<std::string>& names) {
    std::string out;
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (i > 0) out += ", ";
        out += names[i];
    }
    return out;
}

class Resolver {
public:
    Resolver(const Schema& schema, const std::optional<std::string>& scope)
        : schema_(schema) {
        if (scope) {
            scope_ = schema.find_table(*scope);
            if (!scope_) throw ResolveError("unknown table '" + *scope + "'");
        }
    }

    ColumnRef bind(const std::string& column) {
        const Table* owner = nullptr;
        if (scope_) {
            if (!scope_->find_column(column))
                throw ResolveError("table '" + scope_->name + "' has no column '" + column + "'");
            owner = scope_;
        } else {
            const auto owners = tables_owning(schema_, column);
            if (owners.empty()) throw ResolveError("no table has a column '" + column + "'");
            owner = schema_.find_table(owners.front());
        }
        const Column* col = owner->find_column(column);
        note_table(owner->name);
        return {owner->name, col->name};
    }

    PredicatePtr bind(const Predicate& predicate) {
        if (const Comparison* c = predicate.comparison()) {
            ColumnRef ref = bind(c->column);
            check_types(ref, *c);
            return make_comparison(Comparison{ref.table, ref.column, c->op, c->literal});
        }
        const Connective& c = *predicate.connective();
        PredicatePtr left = bind(*c.left);
        PredicatePtr right = bind(*c.right);
        return make_connective(c.op, std::move(left), std::move(right));
    }

    const std::vector<std::string>& tables() const { return tables_; }

private:
    void note_table(const std::string& table) {
        if (std::find(tables_.begin(), tables_.end(), table) == tables_.end())
            tables_.push_back(table);
    }

    void check_types(const ColumnRef& ref, const Comparison& comparison) const {
        const Column& column = *schema_.find_table(ref.table)->find_column(ref.column);
        const std::string where = ref.table + "." + ref.column + " (" +
                                  std::string(to_string(column.kind)) + ")";
        if (!column.numeric() && is_ordering(comparison.op))
            throw ResolveError("type mismatch: comparator " + std::string(symbol(comparison.op)) +
                               " needs a numeric column, " + where + " is not");
        if (column.numeric() != comparison.literal.is_number())
            throw ResolveError("type mismatch: " + where + " compared with " +
                               (comparison.literal.is_number() ? "number " : "string ") +
                               render_literal(comparison.literal));
    }

    const Schema& schema_;
    const Table* scope_ = nullptr;
    std::vector<std::string> tables_;
};

} // namespace

std::string render_predicate(const Predicate& predicate, bool qualify) {
    std::string out;
    render(predicate, qualify, out);
    return out;
}

Clauses extract_clauses(const QueryIR& ir) {
    Clauses clauses;
    clauses.select = "SELECT " + join_names(ir.select_columns);
    if (ir.predicate) clauses.where = "WHERE " + render_predicate(*ir.predicate, false);
    return clauses;
}

ResolvedQuery resolve(const QueryIR& ir, const Schema& schema, const SchemaGraph& graph) {
    if (ir.select_columns.empty()) throw ResolveError("query selects no columns");
    Resolver resolver(schema, ir.scope_table);
    ResolvedQuery out;
    for (const std::string& column : ir.select_columns)
        out.select_refs.push_back(resolver.bind(column));
    if (ir.predicate) out.predicate = resolver.bind(*ir.predicate);
    out.join_plan = join_path(graph, resolver.tables());
    return out;
}

SqlQuery generate_sql(const ResolvedQuery& query) {
    const auto& plan = query.join_plan;
    const bool qualify = plan.tables.size() > 1;

    std::string text = "SELECT ";
    for (std::size_t i = 0; i < query.select_refs.size(); ++i) {
        if (i > 0) text += ", ";
        if (qualify) text += query.select_refs[i].table + ".";
        text += query.select_refs[i].column;
    }
    text += " FROM " + join_names(plan.tables);

    std::vector<std::string> conjuncts;
    if (query.predicate) {
        std::string user = render_predicate(*query.predicate, qualify);
        if (!plan.conditions.empty() && contains_or(*query.predicate)) user = "(" + user + ")";
        conjuncts.push_back(std::move(user));
    }
    for (const JoinCondition& c : plan.conditions)
        conjuncts.push_back(c.left_table + "." + c.left_column + " = " + c.right_table + "." +
                            c.right_column);
    for (std::size_t i = 0; i < conjuncts.size(); ++i)
        text += (i == 0 ? " WHERE " : " AND ") + conjuncts[i];

    return {std::move(text), plan.tables};
}

} // namespace nlsql
