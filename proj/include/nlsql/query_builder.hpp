#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nlsql/ir.hpp"
#include "nlsql/schema.hpp"

namespace nlsql {

struct ColumnRef {
    std::string table;
    std::string column;

    bool operator==(const ColumnRef&) const = default;
};

/// SELECT and WHERE clauses read straight off the IR, columns unqualified.
struct Clauses {
    std::string select;                // "SELECT customer_name"
    std::optional<std::string> where;  // "WHERE balance > 3000"
};

Clauses extract_clauses(const QueryIR& ir);

struct ResolvedQuery {
    std::vector<ColumnRef> select_refs;
    PredicatePtr predicate;  // comparisons carry their owning table; may be null
    JoinPlan join_plan;
};

/// Binds every column to its owning table (the scope table when given,
/// otherwise the first of tables_owning), type-checks comparisons and plans
/// the joins. Throws ResolveError.
ResolvedQuery resolve(const QueryIR& ir, const Schema& schema, const SchemaGraph& graph);

struct SqlQuery {
    std::string text;
    std::vector<std::string> tables;
};

/// Single-line SQL: SELECT, FROM in plan order, WHERE with the user
/// predicate first and the join equalities appended with AND. Columns are
/// qualified only when more than one table is involved; a user predicate
/// containing OR is parenthesized before join conditions are appended.
SqlQuery generate_sql(const ResolvedQuery& query);

/// Infix rendering of a predicate, optionally as table.column.
std::string render_predicate(const Predicate& predicate, bool qualify);

} // namespace nlsql
