#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace nlsql {

enum class ValueKind { Text, Integer, Real };
enum class TableKind { Entity, Relationship };

std::string_view to_string(ValueKind kind);
std::string_view to_string(TableKind kind);

/// Letters, digits and underscore, not starting with a digit.
bool is_identifier(std::string_view name);

/// ASCII case folding used for every identifier comparison.
std::string fold_case(std::string_view text);

struct Column {
    std::string name;
    ValueKind kind = ValueKind::Text;

    bool numeric() const { return kind != ValueKind::Text; }
};

struct Table {
    std::string name;
    TableKind kind = TableKind::Entity;
    std::vector<Column> columns;

    /// Case-insensitive lookup.
    const Column* find_column(std::string_view column) const;
};

/// Validated, immutable set of tables in declaration order.
///
/// Besides per-table checks, a column name shared by several tables must
/// agree in spelling and value kind everywhere it appears: shared names are
/// the join semantics, so a mismatch would make an unjoinable edge.
class Schema {
public:
    /// Throws ConfigError on any invariant violation.
    explicit Schema(std::vector<Table> tables);

    const std::vector<Table>& tables() const { return tables_; }
    std::size_t size() const { return tables_.size(); }

    /// Case-insensitive lookups; nullopt / nullptr when absent.
    std::optional<std::size_t> index_of(std::string_view table) const;
    const Table* find_table(std::string_view table) const;

private:
    std::vector<Table> tables_;
};

/// Parses a schema-config document (strict JSON, see README).
Schema load_schema(std::string_view config_text);

/// Tables owning `column`: entity tables first, then relationship tables,
/// each group in declaration order. Empty when nobody owns it.
std::vector<std::string> tables_owning(const Schema& schema, std::string_view column);

struct SchemaEdge {
    std::size_t a = 0;  // a < b
    std::size_t b = 0;
    std::vector<std::string> shared;  // in declaration order of table a
};

/// Undirected graph over tables; an edge joins every pair of tables that
/// share at least one column name.
class SchemaGraph {
public:
    SchemaGraph() = default;
    SchemaGraph(std::vector<std::string> nodes, std::vector<SchemaEdge> edges);

    const std::vector<std::string>& nodes() const { return nodes_; }
    const std::vector<SchemaEdge>& edges() const { return edges_; }
    std::optional<std::size_t> index_of(std::string_view table) const;

    /// Shared column names of (a, b); empty when the tables are not adjacent.
    const std::vector<std::string>& shared(std::size_t a, std::size_t b) const;
    bool adjacent(std::size_t a, std::size_t b) const { return !shared(a, b).empty(); }

    /// Neighbours in ascending declaration order.
    const std::vector<std::size_t>& neighbors(std::size_t node) const { return adjacency_[node]; }

private:
    std::vector<std::string> nodes_;
    std::vector<SchemaEdge> edges_;
    std::vector<std::vector<std::size_t>> adjacency_;
    std::vector<std::vector<int>> edge_index_;  // -1 when absent
};

SchemaGraph build_graph(const Schema& schema);

struct JoinCondition {
    std::string left_table;
    std::string left_column;
    std::string right_table;
    std::string right_column;

    bool operator==(const JoinCondition&) const = default;
};

struct JoinPlan {
    std::vector<std::string> tables;
    std::vector<JoinCondition> conditions;

    bool operator==(const JoinPlan&) const = default;
};

/// Smallest connected set of tables covering `required`, with one equality
/// per shared column on every chosen edge.
///
/// Up to three required tables the table set is a minimum connected
/// superset (shortest path for two, best meeting table for three). Larger
/// sets use the shortest-path-then-attach-nearest approximation. Ties go to
/// the lexicographically smallest sequence of declaration indices.
///
/// Throws ResolveError for unknown tables or an empty request and
/// DisconnectedError when no path exists.
JoinPlan join_path(const SchemaGraph& graph, const std::vector<std::string>& required);

} // namespace nlsql
